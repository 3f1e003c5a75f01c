"""Transition coefficients between the two sides of the integral dualities.

A_b pairs U_b on (V_l1 x V_l2)[m1, m2] with its dual on (V_m1 x V_m2)[l1, l2];
A-hat_b and A-tilde_b do the same for the q-hypergeometric and trigonometric
solutions.  sink(u) stands for sin(pi u / kappa).
"""
from __future__ import annotations

import numpy as np

from ..glk_rep import is_nonneg_int
from ..special import loggamma

KINDS = ("A", "Ahat", "Atilde")


def _lg(x) -> complex:
    v = complex(loggamma(complex(x)))
    if not np.isfinite(v.real):
        raise ValueError(f"Gamma pole at {x}")
    return v


def _log_sink(u, kappa) -> complex:
    s = np.sin(np.pi * complex(u) / kappa)
    if abs(s) < 1e-300:
        raise ValueError(f"sin(pi u/kappa) vanishes at u={u}")
    return complex(np.log(s))


def _int(x, what) -> int:
    if not is_nonneg_int(x):
        raise ValueError(f"{what} must be a nonnegative integer")
    return int(round(complex(x).real))


def duality_coefficient(kind: str, b: int, l, m, kappa) -> complex:
    """Coefficient A_b(l, m), A-hat_b(l, m) or A-tilde_b(l, m) for gl_2 x gl_2."""
    if kind not in KINDS:
        raise ValueError(f"unknown coefficient kind {kind!r}")
    l1, m1 = complex(l[0]), complex(m[0])
    l2, m2 = _int(l[1], "l_2"), _int(m[1], "m_2")
    kappa = complex(kappa)
    if not 0 <= b <= min(l2, m2):
        raise ValueError(f"b must lie in 0..{min(l2, m2)}")
    if kind == "A":
        out = -m2 * np.log(-2j) + (m1 + 1) * m2 / kappa * np.log(kappa)
        out += -1j * np.pi * (m1 + m2 - b) * m2 / kappa
        out -= sum(_log_sink(s + 1, kappa) for s in range(m2 - b))
        for s in range(m2):
            out += _lg(1 + (l1 - s) / kappa) - _lg(-1 / kappa) - _lg(1 + (s + 1) / kappa)
    elif kind == "Ahat":
        out = -m2 * np.log(2j * np.pi)
        out += sum(_log_sink(l1 - s, kappa) for s in range(m2 - b))
        for s in range(m2):
            out += _lg(1 + (l1 - s) / kappa) + _lg(1 + 1 / kappa) - _lg(1 + (s + 1) / kappa)
    else:
        out = -l2 * np.log(2j * np.pi)
        out += 1j * np.pi * (-b * b + b * (l2 - l1) + l1 * m2 - l2 * m1 - m2 * (m2 - 1) / 2) / kappa
        out -= sum(_log_sink(s + 1, kappa) for s in range(b))
        for s in range(l2):
            out += _lg(1 + (m1 - s) / kappa) + _lg(-(s + 1) / kappa) - _lg(-1 / kappa)
    return complex(np.exp(out))
