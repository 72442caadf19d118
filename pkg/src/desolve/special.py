"""Gamma function and Bessel functions of the first kind for small arguments."""

import math

import numpy as np

from .errors import DomainError, NumericError

# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
BESSEL_MAX_TERMS = 60
BESSEL_REL_TOL = 1e-17


def gamma_fn(z):
    """Gamma function for real ``z > 0``.

    Lanczos series for ``z >= 1/2``; the reflection formula below that.
    """
    z = float(z)
    if not z > 0 or not math.isfinite(z):
        raise DomainError(f"gamma_fn requires a finite z > 0, got {z}")
    if z < 0.5:
        return math.pi / (math.sin(math.pi * z) * gamma_fn(1.0 - z))
    z -= 1.0
    acc = _LANCZOS_COEF[0]
    for k in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc


def bessel_series(nu, z):
    """``S(z) = sum_k (-z^2/4)^k / (k! Gamma(nu + k + 1))`` so ``J_nu = (z/2)^nu S``.

    Successive terms are built by the ratio ``-z^2/4 / ((k+1)(nu+k+1))``;
    summation stops once every term is below ``1e-17`` of its partial sum.
    """
    if not nu + 1.0 > 0:
        raise DomainError(f"order nu={nu} outside the supported range nu > -1")
    z = np.asarray(z, dtype=float)
    q = -0.25 * z * z
    term = np.full(z.shape, 1.0 / gamma_fn(nu + 1.0))
    total = term.copy()
    for k in range(BESSEL_MAX_TERMS):
        term = term * q / ((k + 1.0) * (nu + k + 1.0))
        total = total + term
        if np.all(np.abs(term) <= BESSEL_REL_TOL * np.abs(total)):
            return total
    raise NumericError(f"Bessel series for nu={nu} did not converge in "
                       f"{BESSEL_MAX_TERMS} terms")


def bessel_j(nu, z):
    """Bessel function of the first kind ``J_nu(z)`` for ``z >= 0`` by power series."""
    z = np.asarray(z, dtype=float)
    if np.any(z < 0) or not np.all(np.isfinite(z)):
        raise DomainError("bessel_j requires finite z >= 0")
    with np.errstate(divide="ignore"):
        out = (0.5 * z) ** nu * bessel_series(nu, z)
    return float(out) if out.ndim == 0 else out
