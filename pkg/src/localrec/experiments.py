"""Recovery studies: single-point selection, grid upsampling, local-vs-global
comparison, convergence rates over nested clouds, and the stability limit.

Per-evaluation-point runs are independent, so the grid drivers can fan out
across a thread pool; results land in preallocated slots, making the output
independent of the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .dense import DenseSystem
from .errors import DegeneracyError
from .geometry import PointCloud, fill_distance
from .greedy import (
    Selection,
    StopRule,
    greedy_select,
    lagrange_coefficients,
    lebesgue_constant,
    q_and_Q,
    recover,
)
from .kernel import SobolevKernelSpec

STOP_DEGENERATE = "degenerate"  # per-row failure marker used by grid drivers


def peaks(x, y):
    """The classic two-dimensional three-bump test surface.

    peaks(x, y) = 3 (1-x)^2 exp(-x^2 - (y+1)^2)
                  - 10 (x/5 - x^3 - y^5) exp(-x^2 - y^2)
                  - 1/3 exp(-(x+1)^2 - y^2)

    Accepts scalars or arrays (broadcast); evaluated on raw coordinates.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = (
        3.0 * (1.0 - x) ** 2 * np.exp(-(x**2) - (y + 1.0) ** 2)
        - 10.0 * (x / 5.0 - x**3 - y**5) * np.exp(-(x**2) - y**2)
        - (1.0 / 3.0) * np.exp(-((x + 1.0) ** 2) - y**2)
    )
    if out.ndim == 0:
        return float(out)
    return out


@dataclass
class RecoveryRow:
    """One evaluation point's recovery outcome."""

    z: np.ndarray
    value: float
    p2: float
    lebesgue: float
    npoints: int
    stop_reason: str


@dataclass
class ComparisonRow(RecoveryRow):
    """RecoveryRow plus the full-cloud (global) squared power function,
    None when the dense factorization or evaluation degenerated."""

    p2_global: float | None = None


@dataclass
class ConvergencePoint:
    """One cloud size of a convergence study."""

    N: int
    h: float
    maxP: float


def single_point_study(z, cloud: PointCloud, spec: SobolevKernelSpec, stop=None):
    """Greedy selection at one point, plus the Lebesgue constant after every
    step.  Default stop rule: run until the cloud is used up (k_max = N)."""
    if stop is None:
        stop = StopRule(k_max=len(cloud))
    sel = greedy_select(z, cloud.points, spec, stop)
    lebs = np.empty(len(sel))
    for j in range(1, len(sel) + 1):
        prefix = replace(
            sel,
            site_indices=sel.site_indices[:j],
            newton_on_sites=sel.newton_on_sites[:j, :j],
            newton_at_z=sel.newton_at_z[:j],
            p2_trace=sel.p2_trace[: j + 1],
        )
        lebs[j - 1] = lebesgue_constant(lagrange_coefficients(prefix))
    return sel, lebs


def _recover_at(z, cloud, spec, stop, offer):
    neighbors = cloud.knn(z, offer)
    idx = np.asarray([i for i, _ in neighbors], dtype=int)
    try:
        sel = greedy_select(z, cloud.points[idx], spec, stop)
        weights = lagrange_coefficients(sel)
    except DegeneracyError:
        return RecoveryRow(
            z=np.asarray(z, float),
            value=math.nan,
            p2=math.nan,
            lebesgue=math.nan,
            npoints=0,
            stop_reason=STOP_DEGENERATE,
        )
    if cloud.values is not None:
        value = recover(weights, cloud.values[idx[sel.site_indices]])
    else:
        value = math.nan
    return RecoveryRow(
        z=np.asarray(z, float),
        value=value,
        p2=float(sel.p2_trace[-1]),
        lebesgue=lebesgue_constant(weights),
        npoints=len(sel),
        stop_reason=sel.stop_reason,
    )


def _map_rows(fn, points, workers):
    points = np.atleast_2d(np.asarray(points, dtype=float))
    rows = [None] * len(points)
    if workers is None or workers <= 1 or len(points) < 4:
        for i, z in enumerate(points):
            rows[i] = fn(z)
        return rows
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for i, row in enumerate(pool.map(fn, points)):
            rows[i] = row
    return rows


def upsample(
    cloud: PointCloud,
    eval_points,
    spec: SobolevKernelSpec,
    stop: StopRule,
    offer: int,
    workers: int = 1,
) -> list[RecoveryRow]:
    """Recover the cloud's values at each evaluation point from a greedy
    selection among its `offer` nearest sites.  Requires cloud values; a
    per-point degeneracy is recorded in that row's stop_reason rather than
    aborting the batch."""
    if cloud.values is None:
        raise ValueError("upsample needs a cloud with values")
    if not 1 <= offer <= len(cloud):
        raise ValueError(f"offer must be in [1, {len(cloud)}], got {offer}")
    return _map_rows(lambda z: _recover_at(z, cloud, spec, stop, offer), eval_points, workers)


def compare_global_local(
    cloud: PointCloud,
    eval_points,
    spec: SobolevKernelSpec,
    stop: StopRule,
    offer: int,
    workers: int = 1,
) -> list[ComparisonRow]:
    """Local greedy recovery next to the full-cloud interpolant's P^2.

    The global side needs one dense factorization of the whole cloud; if that
    (or a per-point evaluation) degenerates, the global field is None and the
    local fields stand alone.
    """
    if not 1 <= offer <= len(cloud):
        raise ValueError(f"offer must be in [1, {len(cloud)}], got {offer}")
    try:
        system = DenseSystem(cloud.points, spec)
    except DegeneracyError:
        system = None

    def one(z):
        if cloud.values is not None:
            local = _recover_at(z, cloud, spec, stop, offer)
        else:
            sel = greedy_select(z, cloud.points[[i for i, _ in cloud.knn(z, offer)]], spec, stop)
            local = RecoveryRow(
                z=np.asarray(z, float),
                value=math.nan,
                p2=float(sel.p2_trace[-1]),
                lebesgue=lebesgue_constant(lagrange_coefficients(sel)),
                npoints=len(sel),
                stop_reason=sel.stop_reason,
            )
        p2_global = None
        if system is not None:
            try:
                p2_global = system.power_function(z)
            except DegeneracyError:
                p2_global = None
        return ComparisonRow(
            z=local.z,
            value=local.value,
            p2=local.p2,
            lebesgue=local.lebesgue,
            npoints=local.npoints,
            stop_reason=local.stop_reason,
            p2_global=p2_global,
        )

    return _map_rows(one, eval_points, workers)


def convergence_study(
    spec: SobolevKernelSpec,
    sizes,
    grid,
    seed: int,
    stop: StopRule,
    offer=None,
    workers: int = 1,
):
    """Greedy recovery quality on nested uniform clouds of growing size.

    One seeded uniform sample on [-1, 1]^d is drawn at the largest size; each
    study size uses a prefix, so the clouds are nested.  For each size the
    fill distance h (grid as probe) and the maximum power function over the
    grid are recorded.  Returns (points, slope) where slope is the OLS slope
    of log maxP against log h, or None for fewer than two sizes.
    """
    sizes = [int(s) for s in sizes]
    if not sizes or any(b <= a for a, b in zip(sizes, sizes[1:])) or sizes[0] < 1:
        raise ValueError(f"sizes must be strictly increasing and positive, got {sizes}")
    master = np.random.default_rng(seed).uniform(-1.0, 1.0, size=(sizes[-1], spec.d))
    if offer is None:
        offer = 5 * q_and_Q(spec.m, spec.d)[1]
    results = []
    for n_sites in sizes:
        cloud = PointCloud(master[:n_sites])
        h = fill_distance(cloud, grid)
        eff_offer = min(offer, n_sites)

        def one(z, cloud=cloud, eff=eff_offer):
            idx = [i for i, _ in cloud.knn(z, eff)]
            return float(greedy_select(z, cloud.points[idx], spec, stop).p2_trace[-1])

        p2s = _map_rows(one, grid, workers)
        results.append(ConvergencePoint(N=n_sites, h=h, maxP=math.sqrt(max(p2s))))
    if len(results) < 2:
        return results, None
    logh = np.log([p.h for p in results])
    logp = np.log([p.maxP for p in results])
    slope = float(np.polyfit(logh, logp, 1)[0])
    return results, slope


def stability_fill_limit(m, d) -> float:
    """Fill distance 10^(-15/(2m-d)) below which double-precision recovery is
    dominated by roundoff (the P^2 floor ~1e-15 meets the h^(2m-d) decay)."""
    if not (isinstance(d, (int, np.integer)) and d >= 1):
        raise ValueError(f"d must be a positive integer, got {d!r}")
    two_m_minus_d = 2.0 * m - d
    if not (math.isfinite(two_m_minus_d) and two_m_minus_d > 0.0):
        raise ValueError(f"requires 2m - d > 0, got m={m!r}, d={d!r}")
    return 10.0 ** (-15.0 / two_m_minus_d)
