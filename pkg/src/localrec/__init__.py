"""Greedy local kernel recovery of scattered multivariate data.

Given values of an unknown function on a finite scattered point set, this
package recovers the function at new evaluation points by selecting, per
point, a small near-optimal subset of nearby data sites (greedy minimization
of the squared power function in a Sobolev reproducing-kernel space) and
interpolating on that subset only.
"""

from .errors import DegeneracyError
from .kernel import SobolevKernelSpec, bessel_k, bessel_k_half_integer, kernel_eval

__all__ = [
    "DegeneracyError",
    "SobolevKernelSpec",
    "bessel_k",
    "bessel_k_half_integer",
    "kernel_eval",
]
