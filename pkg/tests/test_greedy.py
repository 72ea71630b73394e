"""Greedy selection against the dense oracle plus its structural identities."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import solve_triangular

from localrec.dense import DenseSystem, power_function_direct
from localrec.errors import DegeneracyError
from localrec.greedy import (
    STOP_EXHAUSTED,
    STOP_KMAX,
    STOP_NO_PROGRESS,
    STOP_REASONS,
    STOP_THRESHOLD,
    Selection,
    StopRule,
    greedy_select,
    lagrange_coefficients,
    lebesgue_constant,
    q_and_Q,
    recover,
)
from localrec.kernel import SobolevKernelSpec, kernel_eval

SPEC = SobolevKernelSpec(m=3.0, d=2)


def cloud(n, seed, d=2):
    return np.random.default_rng(seed).uniform(-1.0, 1.0, size=(n, d))


def run(z, cand, k, spec=SPEC, **stop_kw):
    return greedy_select(z, cand, spec, StopRule(k_max=k, **stop_kw))


# ---------------------------------------------------------------- stop rules


def test_stop_reason_k_max():
    sel = run(np.zeros(2), cloud(40, 0), k=5)
    assert len(sel) == 5 and sel.stop_reason == STOP_KMAX


def test_stop_reason_threshold():
    sel = run(np.zeros(2), cloud(200, 0), k=200, p2_threshold=1e-4)
    assert sel.stop_reason == STOP_THRESHOLD
    assert sel.p2_trace[-1] <= 1e-4
    assert (sel.p2_trace[:-1] > 1e-4).all()  # stopped at the first crossing


def test_stop_reason_exhausted():
    # k_max above the pool size: every candidate gets picked, then none left
    sel = run(np.zeros(2), cloud(6, 1), k=50)
    assert sel.stop_reason == STOP_EXHAUSTED
    assert sorted(sel.site_indices) == list(range(6))


def test_stop_reason_no_progress_far_away():
    # z so far from the pool that no pick would move P^2 measurably
    sel = run(np.array([40.0, 0.0]), cloud(10, 2), k=10)
    assert sel.stop_reason == STOP_NO_PROGRESS
    assert len(sel) == 0
    assert sel.newton_on_sites.shape == (0, 0)
    assert sel.p2_trace.shape == (1,)


def test_single_candidate_trace():
    sel = run(np.array([0.3, -0.2]), np.array([[0.3, -0.2]]), k=3)
    # picking the only site, which is z itself, kills P^2 entirely
    assert sel.stop_reason == STOP_EXHAUSTED
    assert sel.p2_trace[0] == 1.0
    assert sel.p2_trace[-1] <= 1e-12


def test_stop_rule_validation():
    with pytest.raises(ValueError):
        StopRule(k_max=0)
    with pytest.raises(ValueError):
        StopRule(k_max=2.5)
    with pytest.raises(ValueError):
        StopRule(k_max=3, p2_threshold=-1.0)
    with pytest.raises(ValueError):
        StopRule(k_max=3, progress_floor=0.0)


def test_greedy_input_validation():
    stop = StopRule(k_max=2)
    with pytest.raises(ValueError, match="nonempty"):
        greedy_select(np.zeros(2), np.empty((0, 2)), SPEC, stop)
    with pytest.raises(ValueError, match="shape"):
        greedy_select(np.zeros(3), cloud(5, 0), SPEC, stop)
    with pytest.raises(ValueError, match="shape"):
        greedy_select(np.zeros(2), cloud(5, 0, d=3), SPEC, stop)
    with pytest.raises(ValueError, match="finite"):
        greedy_select(np.array([np.nan, 0.0]), cloud(5, 0), SPEC, stop)


# ------------------------------------------------- equivalence with the oracle


def test_p2_trace_matches_dense_power_function():
    z = np.array([0.1, 0.25])
    cand = cloud(30, 3)
    sel = run(z, cand, k=12)
    assert len(sel) == 12
    for j in range(len(sel) + 1):
        ref = power_function_direct(cand[sel.site_indices[:j]], SPEC, z)
        assert sel.p2_trace[j] == pytest.approx(ref, rel=1e-9, abs=1e-12), j


def test_each_pick_is_exhaustively_optimal():
    z = np.array([-0.3, 0.45])
    cand = cloud(15, 4)
    sel = run(z, cand, k=8)
    chosen = list(sel.site_indices)
    for j in range(len(chosen)):
        prefix = cand[chosen[:j]]
        best = min(
            power_function_direct(np.vstack([prefix, cand[i]]) if j else cand[[i]], SPEC, z)
            for i in range(len(cand))
            if i not in chosen[:j]
        )
        assert sel.p2_trace[j + 1] <= best + 1e-12, j


def test_ties_resolve_to_the_lowest_index():
    # both unit-distance sites reduce P^2 identically; index 0 must win
    cand = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 3.0]])
    sel = run(np.zeros(2), cand, k=1)
    assert sel.site_indices[0] == 0


def test_translation_invariance():
    z = np.array([0.2, -0.1])
    cand = cloud(25, 5)
    shift = np.array([0.5, -0.25])
    a = run(z, cand, k=10)
    b = run(z + shift, cand + shift, k=10)
    assert np.array_equal(a.site_indices, b.site_indices)
    assert np.abs(a.p2_trace - b.p2_trace).max() <= 1e-12


# ------------------------------------------------------- structural identities


def test_newton_basis_is_cholesky_factor_of_gram():
    cand = cloud(30, 6)
    sel = run(np.array([0.0, 0.4]), cand, k=10)
    low = sel.newton_on_sites
    assert np.abs(np.triu(low, 1)).max() <= 1e-10
    assert (np.diagonal(low) > 0.0).all()
    picked = cand[sel.site_indices]
    gram = DenseSystem(picked, SPEC).gram
    assert np.abs(low @ low.T - gram).max() <= 1e-10


def test_newton_basis_native_orthonormality():
    # L^-1 G L^-T = I when the basis is orthonormal in the native space
    cand = cloud(30, 7)
    sel = run(np.array([-0.2, 0.3]), cand, k=10)
    low = sel.newton_on_sites
    gram = DenseSystem(cand[sel.site_indices], SPEC).gram
    half = solve_triangular(low, gram, lower=True)
    prod = solve_triangular(low, half.T, lower=True).T
    assert np.abs(prod - np.eye(len(sel))).max() <= 1e-10


def test_newton_at_z_accounts_for_the_trace_drops():
    sel = run(np.array([0.15, 0.05]), cloud(20, 8), k=9)
    drops = sel.p2_trace[:-1] - sel.p2_trace[1:]
    assert np.abs(drops - sel.newton_at_z**2).max() <= 1e-12


def test_work_counters_are_exact():
    n, k = 37, 9
    sel = run(np.array([0.1, 0.1]), cloud(n, 9), k=k)
    assert len(sel) == k
    assert sel.kernel_evals == (k + 2) * n + 1
    assert sel.update_ops == n * k * (k - 1) // 2 + 3 * k * n


def test_duplicate_sites_are_immune():
    base = cloud(12, 10)
    cand = np.vstack([base, base[3], base[3] + 1e-9])
    sel = run(np.array([0.0, 0.0]), cand, k=len(cand))
    assert sel.stop_reason in STOP_REASONS
    assert len(np.unique(sel.site_indices)) == len(sel)
    assert np.isfinite(sel.p2_trace).all()
    assert np.isfinite(sel.newton_on_sites).all()
    # the duplicate pair contributes one representative at most
    assert not {3, 12} <= set(sel.site_indices) or not {3, 13} <= set(
        sel.site_indices
    )


# --------------------------------------------------------- weights and recovery


def test_lagrange_weights_single_pick():
    cand = np.array([[0.4, 0.1], [5.0, 5.0]])
    sel = run(np.array([0.4, 0.1]), cand, k=1)
    w = lagrange_coefficients(sel)
    assert w == pytest.approx([1.0], abs=1e-12)


def test_lagrange_weights_are_cardinal():
    # weights reproduce any kernel translate anchored at a selected site
    z = np.array([0.05, -0.3])
    cand = cloud(25, 11)
    sel = run(z, cand, k=10)
    w = lagrange_coefficients(sel)
    picked = cand[sel.site_indices]
    for anchor in (picked[0], picked[4], picked[-1]):
        fvals = np.array([kernel_eval(SPEC, x, anchor) for x in picked])
        assert recover(w, fvals) == pytest.approx(
            kernel_eval(SPEC, z, anchor), abs=1e-9
        )


def test_recover_matches_dense_interpolant():
    z = np.array([0.2, 0.2])
    cand = cloud(30, 12)
    sel = run(z, cand, k=12)
    w = lagrange_coefficients(sel)
    picked = cand[sel.site_indices]
    rng = np.random.default_rng(99)
    fvals = rng.standard_normal(len(picked))
    ref = DenseSystem(picked, SPEC).interpolate(fvals, z)
    assert recover(w, fvals) == pytest.approx(ref, abs=1e-9)


def test_lagrange_rejects_empty_selection():
    sel = run(np.array([40.0, 0.0]), cloud(5, 13), k=3)
    assert len(sel) == 0
    with pytest.raises(ValueError):
        lagrange_coefficients(sel)


def test_lagrange_rejects_nonpositive_diagonal():
    bad = Selection(
        site_indices=np.array([0, 1]),
        newton_on_sites=np.array([[1.0, 0.0], [0.5, 0.0]]),
        newton_at_z=np.array([0.3, 0.1]),
        p2_trace=np.array([1.0, 0.5, 0.4]),
        stop_reason=STOP_KMAX,
    )
    with pytest.raises(DegeneracyError) as err:
        lagrange_coefficients(bad)
    assert err.value.pivot == 1


def test_recover_and_lebesgue_basics():
    assert recover([0.5, -0.25, 0.75], [2.0, 4.0, 0.0]) == 0.0
    assert lebesgue_constant([0.5, -0.25, 0.1]) == pytest.approx(0.85)
    with pytest.raises(ValueError):
        recover([1.0, 2.0], [1.0])
    with pytest.raises(ValueError):
        lebesgue_constant([])


# --------------------------------------------------------------------- q and Q


def test_q_and_q_reference_table():
    assert q_and_Q(3.0, 2) == (2, 6)
    assert q_and_Q(1.5, 2) == (1, 3)
    assert q_and_Q(6.0, 2) == (5, 21)
    assert q_and_Q(2.0, 3) == (1, 4)
    assert q_and_Q(1.0, 1) == (1, 2)


def test_q_and_q_validation():
    with pytest.raises(ValueError):
        q_and_Q(1.0, 2)  # m must exceed d/2
    with pytest.raises(ValueError):
        q_and_Q(3.0, 0)
    with pytest.raises(ValueError):
        q_and_Q(np.inf, 2)


# ------------------------------------------------------------------ properties


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=25),
    k=st.integers(min_value=1, max_value=25),
    seed=st.integers(min_value=0, max_value=2**32 - 1),
    m=st.sampled_from([1.5, 2.0, 3.0]),
)
def test_greedy_invariants(n, k, seed, m):
    rng = np.random.default_rng(seed)
    cand = rng.uniform(-1.0, 1.0, size=(n, 2))
    z = rng.uniform(-1.0, 1.0, size=2)
    spec = SobolevKernelSpec(m=m, d=2)
    sel = greedy_select(z, cand, spec, StopRule(k_max=k))
    assert sel.stop_reason in STOP_REASONS
    assert len(sel) <= min(k, n)
    assert len(np.unique(sel.site_indices)) == len(sel)
    assert sel.p2_trace[0] == 1.0
    assert (np.diff(sel.p2_trace) <= 1e-15).all()
    assert (sel.p2_trace >= 0.0).all()
    assert np.isfinite(sel.newton_on_sites).all()
    assert (np.diagonal(sel.newton_on_sites) > 0.0).all()
