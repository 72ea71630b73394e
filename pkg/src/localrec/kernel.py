"""Radial kernels reproducing Sobolev spaces W_2^m(R^d).

The kernel family is the Matern/Sobolev radial basis

    Phi_nu(r) = 2^(1-nu) / Gamma(nu) * r^nu * K_nu(r),      nu = m - d/2 > 0,

normalized to a unit peak Phi_nu(0) = 1, evaluated at the scaled distance
r = ||x - y||_2 / c.  K_nu is the modified Bessel function of the second
kind, implemented here from scratch (Temme's series for small argument, a
Steed-type continued fraction for large argument, upward recurrence in the
order) so that the half-integer closed forms remain an independent
cross-check path.  The scalar cores are numba-compiled; recovery runs make
millions of kernel evaluations on short vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

_EPS = 1.0e-16
_MAXIT = 10000
_EULER = 0.5772156649015328606
_ZETA3 = 1.2020569031595942854
# x^3 coefficient of 1/Gamma(1+x); feeds the mu -> 0 limit of Temme's Gamma_1.
_G3 = _EULER**3 / 6.0 - _EULER * math.pi**2 / 12.0 + _ZETA3 / 3.0

# Below this scaled distance the profile is taken as exactly 1.0 (the kernel
# is continuous at 0 for every nu > 0, and the Bessel route loses digits there).
_SMALL_R = 1.0e-8


@njit(cache=True)
def _k_series(mu, x):
    """K_mu(x) and K_{mu+1}(x) by Temme's series; needs x <= 2, |mu| <= 1/2."""
    pimu = math.pi * mu
    fact = 1.0 if pimu == 0.0 else pimu / math.sin(pimu)
    d = -math.log(0.5 * x)
    e = mu * d
    fact2 = 1.0 if e == 0.0 else math.sinh(e) / e
    gampl = 1.0 / math.gamma(1.0 + mu)
    gammi = 1.0 / math.gamma(1.0 - mu)
    if abs(mu) < 1.0e-3:
        # series: (gammi - gampl)/(2 mu) = -euler - _G3 mu^2 + O(mu^4)
        gam1 = -_EULER - _G3 * mu * mu
    else:
        gam1 = (gammi - gampl) / (2.0 * mu)
    gam2 = 0.5 * (gammi + gampl)
    ff = fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
    total = ff
    e = math.exp(e)
    p = 0.5 * e / gampl
    q = 0.5 / (e * gammi)
    c = 1.0
    x2 = 0.25 * x * x
    total1 = p
    for i in range(1, _MAXIT + 1):
        ff = (i * ff + p + q) / (i * i - mu * mu)
        c *= x2 / i
        p /= i - mu
        q /= i + mu
        delta = c * ff
        total += delta
        total1 += c * (p - i * ff)
        if abs(delta) < abs(total) * _EPS:
            return total, total1 * (2.0 / x)
    raise RuntimeError("K_nu series did not converge")


@njit(cache=True)
def _k_continued_fraction(mu, x):
    """K_mu(x) and K_{mu+1}(x) by the CF2 continued fraction; needs x > 2."""
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d
    delh = d
    q1 = 0.0
    q2 = 1.0
    a1 = 0.25 - mu * mu
    q = a1
    c = a1
    a = -a1
    s = 1.0 + q * delh
    converged = False
    for i in range(2, _MAXIT + 1):
        a -= 2.0 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < _EPS:
            converged = True
            break
    if not converged:
        raise RuntimeError("K_nu continued fraction did not converge")
    h = a1 * h
    kmu = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) / s
    kmu1 = kmu * (mu + x + 0.5 - h) / x
    return kmu, kmu1


@njit(cache=True)
def _bessel_k_core(nu, t):
    # split nu = n + mu with integer n >= 0, |mu| <= 1/2
    n = int(nu + 0.5)
    mu = nu - n
    if t <= 2.0:
        kmu, kmu1 = _k_series(mu, t)
    else:
        kmu, kmu1 = _k_continued_fraction(mu, t)
    if n == 0:
        return kmu
    km = kmu
    k = kmu1
    for j in range(1, n):
        km, k = k, km + (2.0 * (mu + j) / t) * k
    return k


@njit(cache=True)
def _profile_core(nu, coef, r):
    out = np.empty(r.shape[0])
    for i in range(r.shape[0]):
        ri = r[i]
        if ri < _SMALL_R:
            out[i] = 1.0
        else:
            out[i] = coef * ri**nu * _bessel_k_core(nu, ri)
    return out


def bessel_k(nu, t):
    """Modified Bessel function of the second kind, K_nu(t).

    Parameters
    ----------
    nu : float
        Order, nu >= 0.
    t : float
        Argument, t > 0.

    Returns
    -------
    float
        K_nu(t), with relative accuracy around 1e-13 on t in [1e-6, 30],
        nu in [0.5, 6] (the contract asks for 1e-10).

    Notes
    -----
    The order is split as nu = n + mu with integer n >= 0 and |mu| <= 1/2.
    K_mu and K_{mu+1} come from Temme's series for t <= 2 and from the
    Steed/Thompson-Barnett continued fraction for t > 2; upward recurrence
    K_{s+1} = K_{s-1} + (2 s / t) K_s then climbs to K_nu.  The recurrence is
    forward-stable for K (the dominant solution grows with the order).
    """
    t = float(t)
    nu = float(nu)
    if math.isnan(t) or t <= 0.0:
        raise ValueError(f"bessel_k requires t > 0, got t={t!r}")
    if math.isnan(nu) or nu < 0.0:
        raise ValueError(f"bessel_k requires nu >= 0, got nu={nu!r}")
    return _bessel_k_core(nu, t)


def bessel_k_half_integer(nu, t):
    """Closed-form K_nu(t) for half-integer nu in {1/2, 3/2, 5/2, ...}.

    Independent cross-check path for :func:`bessel_k`:

        K_{n+1/2}(t) = sqrt(pi/(2t)) e^{-t} sum_{j=0}^{n} (n+j)! / (j! (n-j)! (2t)^j)
    """
    half = nu - 0.5
    n = int(round(half))
    if abs(half - n) > 1e-12 or n < 0:
        raise ValueError(f"nu must be a positive half-integer, got {nu!r}")
    if t <= 0.0:
        raise ValueError(f"bessel_k_half_integer requires t > 0, got t={t!r}")
    acc = 0.0
    for j in range(n, -1, -1):
        term = (
            math.factorial(n + j)
            / (math.factorial(j) * math.factorial(n - j))
            / (2.0 * t) ** j
        )
        acc += term
    return math.sqrt(math.pi / (2.0 * t)) * math.exp(-t) * acc


@dataclass(frozen=True)
class SobolevKernelSpec:
    """Kernel parameters: smoothness m, space dimension d, length scale c.

    Requires m > d/2 (so nu = m - d/2 > 0 and W_2^m embeds in C^0), d >= 1,
    c > 0.  The derived order nu and the peak normalization constant are
    precomputed on construction.
    """

    m: float
    d: int
    c: float = 1.0

    def __post_init__(self):
        if not isinstance(self.d, (int, np.integer)) or self.d < 1:
            raise ValueError(f"d must be a positive integer, got {self.d!r}")
        if not (math.isfinite(self.m) and self.m > self.d / 2.0):
            raise ValueError(f"m must satisfy m > d/2 = {self.d / 2.0}, got {self.m!r}")
        if not (math.isfinite(self.c) and self.c > 0.0):
            raise ValueError(f"c must be positive, got {self.c!r}")
        nu = self.m - self.d / 2.0
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "_peak_coef", 2.0 ** (1.0 - nu) / math.gamma(nu))

    def profile(self, r):
        """Unit-peak radial profile Phi_nu at scaled distance r >= 0."""
        if r < _SMALL_R:
            return 1.0
        return self._peak_coef * r**self.nu * _bessel_k_core(self.nu, r)

    def profile_many(self, r):
        """profile() over an array of scaled distances (any shape)."""
        r = np.ascontiguousarray(r, dtype=float)
        return _profile_core(self.nu, self._peak_coef, r.ravel()).reshape(r.shape)


def kernel_eval(spec: SobolevKernelSpec, x, y) -> float:
    """K(x, y) = Phi_nu(||x - y|| / c) for two points of dimension spec.d."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (spec.d,) or y.shape != (spec.d,):
        raise ValueError(
            f"points must have shape ({spec.d},), got {x.shape} and {y.shape}"
        )
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise ValueError("points must have finite coordinates")
    r = float(np.linalg.norm(x - y)) / spec.c
    return spec.profile(r)
