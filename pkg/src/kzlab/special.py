"""Complex Gamma function via the Lanczos approximation.

The log form is used throughout so that Gamma ratios with large imaginary
arguments (Mellin-Barnes lines) stay finite.  Only ``exp`` of the returned
logarithms is meaningful: the imaginary part may differ from the principal
``loggamma`` branch by a multiple of 2*pi.
"""
from __future__ import annotations

import numpy as np

_G = 7.0
_COEFFS = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)


def log_sin(w):
    """log(sin(w)) evaluated without overflow for large |Im w|."""
    w = np.asarray(w, dtype=complex)
    upper = w.imag >= 0
    out = np.empty_like(w)
    with np.errstate(divide="ignore", invalid="ignore"):
        wu = w[upper]
        out[upper] = -1j * wu - np.log(2.0) + 0.5j * np.pi + np.log(-np.expm1(2j * wu))
        wl = w[~upper]
        out[~upper] = 1j * wl - np.log(2.0) - 0.5j * np.pi + np.log(-np.expm1(-2j * wl))
    return out


def _lanczos_right(z):
    z = z - 1.0
    x = np.full_like(z, _COEFFS[0])
    for i in range(1, len(_COEFFS)):
        x = x + _COEFFS[i] / (z + i)
    t = z + _G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(x)


def loggamma(z):
    """Logarithm of Gamma(z) for complex z (array or scalar).

    Uses reflection for Re z < 1/2.  At the poles the result is +inf.
    """
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.empty_like(z)
    right = z.real >= 0.5
    out[right] = _lanczos_right(z[right])
    zl = z[~right]
    if zl.size:
        with np.errstate(divide="ignore", invalid="ignore"):
            ls = log_sin(np.pi * zl)
            out[~right] = np.log(np.pi) - ls - _lanczos_right(1.0 - zl)
        pole = (zl.imag == 0) & (zl.real == np.round(zl.real))
        sub = out[~right]
        sub[pole] = np.inf
        out[~right] = sub
    return out[0] if scalar else out


def gamma(z):
    """Gamma(z) for complex z."""
    return np.exp(loggamma(z))


def rgamma(z):
    """1/Gamma(z), equal to zero at the poles."""
    lg = loggamma(z)
    with np.errstate(over="ignore"):
        return np.where(np.isinf(np.real(lg)), 0.0, np.exp(-np.where(np.isinf(np.real(lg)), 0.0, lg)))


def gamma_ratio(num, den):
    """prod Gamma(num_i) / prod Gamma(den_j), computed in log space."""
    total = sum(loggamma(a) for a in num) - sum(loggamma(b) for b in den)
    return np.exp(total)
