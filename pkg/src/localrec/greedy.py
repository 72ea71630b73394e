"""Greedy per-point site selection in the native space of a Sobolev kernel.

For one evaluation point z and a pool of candidate sites, points are picked
one at a time to maximally reduce the squared power function P^2(z) of the
selected set.  Everything runs on three recursively updated vectors (the
kernel column at z, the recursive-kernel diagonal, and P^2 itself) plus the
growing Newton basis, which is an implicit Cholesky factorization of the
selected Gram matrix adapted to z.  Cost: O(k n) kernel evaluations and
O(k^2 n) floating operations for k picks from n candidates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DegeneracyError
from .kernel import SobolevKernelSpec

STOP_KMAX = "k_max"
STOP_THRESHOLD = "threshold"
STOP_EXHAUSTED = "exhausted"
STOP_NO_PROGRESS = "no_progress"
STOP_REASONS = frozenset({STOP_KMAX, STOP_THRESHOLD, STOP_EXHAUSTED, STOP_NO_PROGRESS})

# p2_trace entries this far below zero are rounding noise and are clamped to
# 0; anything lower aborts the run.
_NEG_P2_TOL = -1.0e-12


@dataclass(frozen=True)
class StopRule:
    """Termination policy for one greedy run.

    k_max: hard cap on the number of selected sites (>= 1).
    p2_threshold: stop once P^2(z) <= this; 0 disables the check.
    progress_floor: candidates whose recursive-kernel diagonal falls below
        this are deactivated (duplicate immunity), and a best score below it
        stops the run.
    """

    k_max: int
    p2_threshold: float = 0.0
    progress_floor: float = 1.0e-13

    def __post_init__(self):
        if not isinstance(self.k_max, (int, np.integer)) or self.k_max < 1:
            raise ValueError(f"k_max must be a positive integer, got {self.k_max!r}")
        if not (math.isfinite(self.p2_threshold) and self.p2_threshold >= 0.0):
            raise ValueError(f"p2_threshold must be >= 0, got {self.p2_threshold!r}")
        if not (math.isfinite(self.progress_floor) and self.progress_floor > 0.0):
            raise ValueError(
                f"progress_floor must be positive, got {self.progress_floor!r}"
            )


@dataclass
class Selection:
    """Result of one greedy run at a single evaluation point.

    site_indices: positions of the selected sites in the candidate list, in
        selection order (j entries, all distinct).
    newton_on_sites: (j, j) Newton basis on the selected sites; entry [i, m]
        is N_m(x_i).  Lower-triangular up to roundoff (~1e-10), positive
        diagonal; it is the Cholesky factor of the selected Gram matrix.
    newton_at_z: N_m(z), m = 1..j.
    p2_trace: P^2(z) before any pick and after each pick (j + 1 entries,
        starting at K(z,z), nonincreasing, clamped at 0).
    stop_reason: one of STOP_REASONS.
    kernel_evals / update_ops: work counters (kernel calls, inner-loop
        multiply-adds) backing the O(kn) / O(k^2 n) complexity claims.
    """

    site_indices: np.ndarray
    newton_on_sites: np.ndarray
    newton_at_z: np.ndarray
    p2_trace: np.ndarray
    stop_reason: str
    kernel_evals: int = 0
    update_ops: int = 0

    def __len__(self):
        return len(self.site_indices)


def greedy_select(
    z, candidates, spec: SobolevKernelSpec, stop: StopRule
) -> Selection:
    """Select sites from `candidates` greedily for the evaluation point z.

    Each step picks the active candidate maximizing zvec_k^2 / dvec_k (the
    one-step P^2 reduction), ties toward the lower index, then extends the
    Newton basis and downdates zvec, dvec, and P^2.  Selected or nearly
    dependent candidates are deactivated through the progress floor, so
    duplicates can never be picked twice or divide by ~0.
    """
    z = np.asarray(z, dtype=float)
    cand = np.atleast_2d(np.asarray(candidates, dtype=float))
    if cand.size == 0:
        raise ValueError("candidates must be nonempty")
    if z.shape != (spec.d,):
        raise ValueError(f"z must have shape ({spec.d},), got {z.shape}")
    if cand.shape[1] != spec.d:
        raise ValueError(
            f"candidates must have shape (n, {spec.d}), got {cand.shape}"
        )
    if not (np.isfinite(z).all() and np.isfinite(cand).all()):
        raise ValueError("z and candidates must have finite coordinates")

    n = cand.shape[0]
    evals = 0
    ops = 0

    # zvec_k = K_j(z, x_k), dvec_k = K_j(x_k, x_k), p2 = P^2(z), all for the
    # current recursive kernel K_j
    zvec = spec.profile_many(np.linalg.norm(cand - z, axis=1) / spec.c)
    dvec = spec.profile_many(np.zeros(n))
    p2 = spec.profile(0.0)
    evals += 2 * n + 1

    active = np.ones(n, dtype=bool)
    cap = min(stop.k_max, n)
    basis = np.empty((cap, n))  # basis[m] = N_{m+1} over all candidates
    selected: list[int] = []
    at_z: list[float] = []
    trace = [p2]

    while True:
        if stop.p2_threshold > 0.0 and p2 <= stop.p2_threshold:
            reason = STOP_THRESHOLD
            break
        if len(selected) >= stop.k_max:
            reason = STOP_KMAX
            break
        if not active.any():
            reason = STOP_EXHAUSTED
            break
        scores = np.full(n, -np.inf)
        scores[active] = zvec[active] ** 2 / dvec[active]
        best = int(np.argmax(scores))  # first max = lowest index on ties
        if scores[best] < stop.progress_floor:
            reason = STOP_NO_PROGRESS
            break

        j = len(selected)
        root = math.sqrt(dvec[best])
        col = spec.profile_many(np.linalg.norm(cand - cand[best], axis=1) / spec.c)
        evals += n
        if j:
            col -= basis[:j].T @ basis[:j, best]
            ops += j * n
        row = col / root
        nz = zvec[best] / root  # = sqrt of this step's P^2 drop, sign included
        zvec = zvec - nz * row
        dvec = dvec - row * row
        p2 = p2 - nz * nz
        ops += 3 * n
        if p2 < 0.0:
            if p2 < _NEG_P2_TOL:
                raise DegeneracyError(
                    f"squared power function {p2:.3e} < {_NEG_P2_TOL}"
                )
            p2 = 0.0
        active &= dvec >= stop.progress_floor
        basis[j] = row
        selected.append(best)
        at_z.append(nz)
        trace.append(p2)

    j = len(selected)
    if j:
        lower = basis[:j][:, selected].T.copy()
    else:
        lower = np.zeros((0, 0))
    return Selection(
        site_indices=np.asarray(selected, dtype=int),
        newton_on_sites=lower,
        newton_at_z=np.asarray(at_z, dtype=float),
        p2_trace=np.asarray(trace, dtype=float),
        stop_reason=reason,
        kernel_evals=evals,
        update_ops=ops,
    )


def lagrange_coefficients(selection: Selection) -> np.ndarray:
    """Cardinal interpolation weights L_k(z) for the selected sites.

    Solves sum_k L_k(z) N_m(x_k) = N_m(z) for m = 1..j, a triangular system
    in the Newton basis (back substitution against the transposed factor).
    """
    j = len(selection)
    if j == 0:
        raise ValueError("selection is empty; no weights to compute")
    lower = selection.newton_on_sites
    diag = np.diagonal(lower)
    if not (diag > 0.0).all():
        raise DegeneracyError(
            f"nonpositive Newton diagonal at index {int(np.argmin(diag))}",
            pivot=int(np.argmin(diag)),
        )
    return solve_triangular(lower, selection.newton_at_z, trans="T", lower=True)


def recover(weights, fvals) -> float:
    """Recovered value sum_k L_k(z) f(x_k)."""
    weights = np.asarray(weights, dtype=float)
    fvals = np.asarray(fvals, dtype=float)
    if weights.shape != fvals.shape or weights.ndim != 1:
        raise ValueError(
            f"weights and fvals must be equal-length vectors, got {weights.shape} vs {fvals.shape}"
        )
    return float(weights @ fvals)


def lebesgue_constant(weights) -> float:
    """sum_k |L_k(z)|, the recovery's amplification of data errors."""
    weights = np.asarray(weights, dtype=float)
    if weights.size == 0:
        raise ValueError("weights must be nonempty")
    return float(np.abs(weights).sum())


def q_and_Q(m, d) -> tuple[int, int]:
    """Polynomial reproduction order q = ceil(m - d/2) and the dimension
    Q = C(q + d, d) of polynomials of degree <= q on R^d.

    Q is the natural per-point selection size; 5 Q is the default number of
    offered neighbors.
    """
    if not (isinstance(d, (int, np.integer)) and d >= 1):
        raise ValueError(f"d must be a positive integer, got {d!r}")
    if not (math.isfinite(m) and m > d / 2.0):
        raise ValueError(f"m must satisfy m > d/2 = {d / 2.0}, got {m!r}")
    q = math.ceil(m - d / 2.0)
    return q, math.comb(q + d, d)
