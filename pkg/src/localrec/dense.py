"""Dense reference implementations: full Gram interpolation, the direct
squared power function, and a condition estimate.

These are the slow, assumption-free counterparts of the greedy module, kept
deliberately independent of it: the Gram matrix is factorized by unpivoted
Cholesky (no regularization jitter; a nonpositive pivot is a hard failure
carrying its index), interpolation weights come from two triangular solves,
and P^2 is the explicit quadratic form.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_triangular
from scipy.spatial.distance import cdist

from .errors import DegeneracyError
from .kernel import SobolevKernelSpec

# Mirrors the greedy trace rule: rounding may take P^2 this far below zero;
# anything worse means the arithmetic has degenerated.
_NEG_P2_TOL = -1.0e-12


def cholesky_unpivoted(a):
    """Lower-triangular L with L L^T = a, or DegeneracyError naming the first
    nonpositive pivot.  No pivoting, no jitter: breakdown is the signal."""
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    low = np.zeros((n, n))
    for j in range(n):
        pivot = a[j, j] - low[j, :j] @ low[j, :j]
        if not pivot > 0.0:
            raise DegeneracyError(
                f"nonpositive pivot {pivot:.3e} at index {j}", pivot=j
            )
        ljj = np.sqrt(pivot)
        low[j, j] = ljj
        if j + 1 < n:
            low[j + 1 :, j] = (a[j + 1 :, j] - low[j + 1 :, :j] @ low[j, :j]) / ljj
    return low


class DenseSystem:
    """Gram matrix of a full site set plus its triangular factor.

    Construction fails with DegeneracyError (carrying the pivot index) when
    the unpivoted factorization meets a nonpositive pivot.
    """

    def __init__(self, sites, spec: SobolevKernelSpec):
        sites = np.atleast_2d(np.asarray(sites, dtype=float))
        if sites.shape[0] < 1 or sites.shape[1] != spec.d:
            raise ValueError(
                f"sites must be a nonempty (n, {spec.d}) array, got shape {sites.shape}"
            )
        if not np.isfinite(sites).all():
            raise ValueError("sites must have finite coordinates")
        self.sites = sites
        self.spec = spec
        r = cdist(sites, sites) / spec.c
        gram = spec.profile_many(r)
        # one evaluation per unordered pair, mirrored: exact symmetry
        gram = np.triu(gram)
        self.gram = gram + np.triu(gram, 1).T
        self.factor = cholesky_unpivoted(self.gram)

    def _solve(self, rhs):
        y = solve_triangular(self.factor, rhs, lower=True)
        return solve_triangular(self.factor, y, trans="T", lower=True)

    def kernel_row(self, z):
        z = np.asarray(z, dtype=float)
        if z.shape != (self.spec.d,):
            raise ValueError(f"z must have shape ({self.spec.d},), got {z.shape}")
        r = np.linalg.norm(self.sites - z, axis=1) / self.spec.c
        return self.spec.profile_many(r)

    def interpolate(self, fvals, z) -> float:
        fvals = np.asarray(fvals, dtype=float)
        if fvals.shape != (len(self.sites),):
            raise ValueError(
                f"fvals must have shape ({len(self.sites)},), got {fvals.shape}"
            )
        return float(self.kernel_row(z) @ self._solve(fvals))

    def power_function(self, z) -> float:
        """Squared power function P^2(z) = K(z,z) - 2 b'u + u' G u, u = G^{-1} b.

        The full quadratic form is stationary at the exact weights, so solve
        error enters only at second order and cannot push the value far
        negative; tiny negatives are clamped to 0, larger ones abort.
        """
        b = self.kernel_row(z)
        u = self._solve(b)
        p2 = self.spec.profile(0.0) - 2.0 * (b @ u) + u @ (self.gram @ u)
        if p2 < 0.0:
            if p2 < _NEG_P2_TOL:
                raise DegeneracyError(f"squared power function {p2:.3e} < {_NEG_P2_TOL}")
            p2 = 0.0
        return float(p2)


def dense_interpolate(system: DenseSystem, fvals, z) -> float:
    """Value at z of the full-Gram kernel interpolant of (sites, fvals)."""
    return system.interpolate(fvals, z)


def power_function_direct(sites, spec: SobolevKernelSpec, z) -> float:
    """P^2(z) for the interpolation system on `sites`; K(z,z) when empty."""
    sites = np.asarray(sites, dtype=float)
    if sites.size == 0:
        return spec.profile(0.0)
    return DenseSystem(sites, spec).power_function(z)


def condition_estimate(system: DenseSystem, tol=1.0e-8, maxit=1000) -> float:
    """2-norm condition estimate of the Gram matrix, good to well under a
    factor of 10: power iteration for the largest eigenvalue, inverse power
    iteration through the factor for the smallest."""
    gram = system.gram
    n = gram.shape[0]
    if n == 1:
        return 1.0
    rng = np.random.default_rng(0)

    def extreme(apply_op):
        v = rng.standard_normal(n)
        v /= np.linalg.norm(v)
        lam = 0.0
        for _ in range(maxit):
            w = apply_op(v)
            new = float(np.linalg.norm(w))
            if new == 0.0:
                return 0.0
            v = w / new
            if abs(new - lam) <= tol * new:
                return new
            lam = new
        return lam

    lam_max = extreme(lambda v: gram @ v)
    inv_norm = extreme(system._solve)  # converges to 1 / lambda_min
    return lam_max * inv_norm
