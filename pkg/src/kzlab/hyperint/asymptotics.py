"""Leading terms of the integral solutions in their asymptotic regimes.

Udas / Udla   U_d     as Im(z_i - z_i+1) -> -inf, or Re((lam_1 - lam_2)/kappa) -> +inf
Utas          U~_d    as (lam_1 - lam_2)/kappa -> +inf
Uhas          U^_d    as Re(z_i - z_i+1) -> +inf

Each leading term is a scalar multiple of v_d.  Branches follow the
conventions of :mod:`kzlab.hyperint.master`: principal logarithms for the
rational case, arguments measured from the ordered arguments of the points
in the trigonometric case, and the lambda rules of the q-master function.
"""
from __future__ import annotations

import time
from math import factorial

import numpy as np

from ..report import VerificationReport
from ..special import loggamma
from .master import lambda_logs, ordered_args, rel_log
from .solutions import SolutionVector, gl2_space, integrate_solution

REGIMES = {"Udas": "U", "Udla": "U", "Utas": "Ut", "Uhas": "Uh"}


def _finite_lg(x) -> complex:
    v = complex(loggamma(complex(x)))
    if not np.isfinite(v.real):
        raise ValueError(f"Gamma pole at {x}")
    return v


def xi(d, l) -> complex:
    """sum over i <= j of l_i d_j."""
    return sum(l[i] * d[j] for j in range(len(d)) for i in range(j + 1))


def zeta(d, l) -> complex:
    return sum(d[j] * (2 * l[j] - d[j] + 1) / 2 for j in range(len(d)))


def _loop_gammas(d, l, kappa) -> complex:
    out = 0j
    for j, dj in enumerate(d):
        for s in range(dj):
            out += _finite_lg(-1 / kappa) - _finite_lg(1 + (l[j] - s) / kappa) - _finite_lg(-(s + 1) / kappa)
    return out


def _log_xi_rational(d, z, lam, l, kappa) -> complex:
    n = len(z)
    la1, la2 = lam
    m2 = sum(d)
    out = -m2 * np.log(kappa)
    out += la1 * sum(z[i] * (l[i] - d[i]) for i in range(n)) + la2 * sum(z[i] * d[i] for i in range(n))
    out += sum(d[i] * (l[i] - d[i]) for i in range(n)) * np.log((la1 - la2) / kappa)
    for i in range(n):
        for j in range(i + 1, n):
            out += ((l[i] - d[i]) * (l[j] - d[j]) + d[i] * d[j]) * np.log(z[i] - z[j])
    return complex(out)


def _log_xi_trig(d, z, lam, l, m, kappa) -> complex:
    n = len(z)
    la1, la2 = lam
    m1, m2 = m
    args = ordered_args(z)
    out = sum(d[i] * (l[i] - d[i] + 1) for i in range(n)) * np.log((la1 - la2) / kappa)
    for i in range(n):
        e = (la1 - m1) * (l[i] - d[i]) + (la2 - m2) * d[i] + ((l[i] - d[i]) ** 2 + d[i] ** 2) / 2
        out += e * rel_log(z[i], args[i])
        for j in range(i + 1, n):
            out += ((l[i] - d[i]) * (l[j] - d[j]) + d[i] * d[j]) * rel_log(z[i] - z[j], args[i])
    return complex(out)


def _log_xi_q(d, z, lam, l, kappa) -> complex:
    n = len(z)
    lg1, lg2, lg12 = lambda_logs(lam)
    out = sum(z[i] * (l[i] - d[i]) - l[i] ** 2 / 2 + d[i] ** 2 / 2 for i in range(n)) * lg1
    out += sum(d[i] * (z[i] - l[i] + d[i] / 2) for i in range(n)) * lg2
    out += sum(d[i] * (l[i] - d[i]) for i in range(n)) * lg12
    for i in range(n):
        for j in range(i + 1, n):
            e = (l[i] - d[i]) * (l[j] - d[j]) + d[i] * d[j] - l[i] * l[j]
            out += e * np.log((z[i] - z[j]) / kappa)
    return complex(out)


def leading_coefficient(kind: str, d, z, lam, l, m, kappa) -> complex:
    """Scalar c with U_d ~ c (v_d + o(1)) in the regime named by ``kind``."""
    if kind not in REGIMES:
        raise ValueError(f"unknown asymptotic regime {kind!r}")
    d = tuple(int(x) for x in d)
    z = tuple(complex(x) for x in z)
    lam = tuple(complex(x) for x in lam)
    l = tuple(complex(x) for x in l)
    m = tuple(complex(x) for x in m)
    kappa = complex(kappa)
    m2 = sum(d)
    if kind in ("Udas", "Udla", "Utas"):
        lx = _log_xi_rational(d, z, lam, l, kappa) if kind != "Utas" else _log_xi_trig(d, z, lam, l, m, kappa)
        log_c = m2 * np.log(2j * np.pi) + 1j * np.pi * xi(d, l) / kappa + lx / kappa + _loop_gammas(d, l, kappa)
        return complex(np.exp(log_c))
    log_c = m2 * np.log(-2j) + np.log(factorial(m2)) + 1j * np.pi * zeta(d, l) / kappa
    log_c += _log_xi_q(d, z, lam, l, kappa) / kappa
    for j, dj in enumerate(d):
        log_c += np.log(factorial(dj))
        for s in range(dj):
            log_c += _finite_lg((s - l[j]) / kappa) + _finite_lg(1 + (s + 1) / kappa) - _finite_lg(1 + 1 / kappa)
    return complex(np.exp(log_c))


def asymptotic_leading(kind: str, d, z, lam, l, m, kappa) -> SolutionVector:
    """Leading term as a vector (the coefficient times v_d)."""
    space = gl2_space(l, m)
    d = tuple(int(x) for x in d)
    vec = np.zeros(space.dim, dtype=complex)
    vec[space.index[d]] = leading_coefficient(kind, d, z, lam, l, m, kappa)
    return SolutionVector(kind, d, space, vec, 0.0, {"regime": kind, "leading_term": True})


def regime_point(kind: str, scale: float, z0, lam0, kappa):
    """Move a base point into the regime: the driving parameter grows with ``scale``."""
    z = [complex(x) for x in z0]
    lam = [complex(x) for x in lam0]
    if kind == "Udas":
        z = [x + 1j * scale * i for i, x in enumerate(z)]
    elif kind in ("Udla", "Utas"):
        k = complex(kappa)
        lam = [lam[0] + scale * k / 2, lam[1] - scale * k / 2]
    elif kind == "Uhas":
        z = [x - scale * i for i, x in enumerate(z)]
    else:
        raise ValueError(f"unknown asymptotic regime {kind!r}")
    return tuple(z), tuple(lam)


def ratio_sweep(kind: str, d, l, m, kappa, z0, lam0, scales, quadrature=None,
                tolerance: float = 0.05) -> VerificationReport:
    """Ratio of the integral to its leading term along a regime sweep.

    The residual at each scale is |U_d[d] / c - 1|; the report passes when
    every one is within ``tolerance`` and they decrease along the sweep.
    The other coordinates of U_d / c are recorded as ``off_diagonal``.
    """
    d = tuple(int(x) for x in d)
    frame = {"kind": kind, "d": list(d), "l": list(l), "m": list(m), "kappa": kappa,
             "z0": list(z0), "lam0": list(lam0), "scales": list(scales)}
    rep = VerificationReport(f"asymptotic:{kind}", frame, len(scales), 0, tolerance,
                             notes={"ratios": [], "off_diagonal": [], "quadrature_rel_error": []})
    t0 = time.perf_counter()
    devs = []
    for s in scales:
        z, lam = regime_point(kind, s, z0, lam0, kappa)
        sol = integrate_solution(REGIMES[kind], d, z, lam, l, m, kappa, quadrature)
        c = leading_coefficient(kind, d, z, lam, l, m, kappa)
        ratio = sol.values / c
        q = sol.space.index[d]
        devs.append(float(abs(ratio[q] - 1)))
        rep.add(devs[-1], {"scale": s})
        off = np.delete(ratio, q)
        rep.notes["ratios"].append(complex(ratio[q]))
        rep.notes["off_diagonal"].append(float(np.abs(off).max()) if off.size else 0.0)
        rep.notes["quadrature_rel_error"].append(sol.rel_error)
    rep.notes["deviations"] = devs
    monotone = all(b <= a for a, b in zip(devs, devs[1:]))
    rep.notes["monotone"] = monotone
    if not monotone:
        rep.failures.append({"reason": "deviation from 1 is not decreasing along the sweep",
                             "deviations": devs})
    rep.wall_time = time.perf_counter() - t0
    return rep
