"""Selberg-type integrals: closed forms and direct quadrature.

rational:  loops gamma_m around 0 from +inf, integrand
           exp(-nu sum s) prod (-s_a)^(-1 - l/kappa) prod_{a<b} (s_a - s_b)^(2/kappa)
q:         vertical plane Re s_a = -Re l / (2 kappa), integrand
           (-x)^(sum s) prod Gamma(s_a) Gamma(-s_a - l/kappa)
           prod_{a != b} Gamma(s_a - s_b + 1/kappa) / Gamma(s_a - s_b)

The q-plane sits halfway between the pole sequences of Gamma(s) and
Gamma(-s - l/kappa).
"""
from __future__ import annotations

import time

import numpy as np

from ..report import VerificationReport
from ..special import loggamma
from .contours import build_contour
from .solutions import integrate_product, line_extent, residue

KINDS = ("rational", "q")
MAX_M = 2


def _lg(x) -> complex:
    v = complex(loggamma(complex(x)))
    if not np.isfinite(v.real):
        raise ValueError(f"Gamma pole at {x}")
    return v


def selberg_exponent(m: int, l, kappa) -> complex:
    """Exponent of nu in the rational closed form."""
    return m * (complex(l) - m + 1) / complex(kappa)


def selberg_closed_form(kind: str, m: int, l, kappa, nu=None, x=None) -> complex:
    if kind not in KINDS:
        raise ValueError(f"unknown Selberg kind {kind!r}")
    if m < 0:
        raise ValueError("m must be nonnegative")
    l, kappa = complex(l), complex(kappa)
    if m == 0:
        return 1.0 + 0j
    if kind == "rational":
        nu = complex(nu)
        if nu.real <= 0:
            raise ValueError("the rational Selberg integral needs Re nu > 0")
        out = m * np.log(-2j * np.pi) + selberg_exponent(m, l, kappa) * np.log(nu)
        for j in range(m):
            out += _lg(1 - 1 / kappa) - _lg(1 + (l - j) / kappa) - _lg(1 - (j + 1) / kappa)
        return complex(np.exp(out))
    x = complex(x)
    if x.imag == 0 and x.real >= 0:
        raise ValueError("the q Selberg integral needs x off the ray [0, +inf)")
    out = m * np.log(2j * np.pi)
    out += (m - 1 - 2 * l) * m / (2 * kappa) * np.log(-x)
    out += m * (l - m + 1) / kappa * np.log(1 - x)
    for j in range(m):
        out += _lg((j - l) / kappa) + _lg(1 + (j + 1) / kappa) - _lg(1 + 1 / kappa)
    return complex(np.exp(out))


def _rational_integrand(m, l, kappa, nu):
    def func(s):
        out = -nu * s.sum(axis=-1) - (1 + l / kappa) * np.log(-s).sum(axis=-1)
        for a in range(m):
            for b in range(a + 1, m):
                out = out + (2 / kappa) * np.log(s[..., a] - s[..., b])
        return np.exp(out)[..., None]
    return func


def _q_integrand(m, l, kappa, x):
    lx = np.log(-x)

    def func(s):
        out = lx * s.sum(axis=-1)
        for a in range(m):
            out = out + loggamma(s[..., a]) + loggamma(-s[..., a] - l / kappa)
            for b in range(m):
                if a != b:
                    u = s[..., a] - s[..., b]
                    out = out + loggamma(u + 1 / kappa) - loggamma(u)
        with np.errstate(invalid="ignore"):
            val = np.exp(out)
        return np.where(np.isfinite(val), val, 0.0)[..., None]
    return func


def selberg_integrate(kind: str, m: int, l, kappa, nu=None, x=None, quadrature=None):
    """Quadrature value and error estimate (change under panel halving)."""
    if kind not in KINDS:
        raise ValueError(f"unknown Selberg kind {kind!r}")
    if not 0 <= m <= MAX_M:
        raise ValueError(f"Selberg quadrature is implemented for m <= {MAX_M}")
    if m == 0:
        return 1.0 + 0j, 0.0
    quad = dict(quadrature or {})
    level = int(quad.pop("level", 0))
    if m == 2:
        quad.setdefault("order", 20)
    l, kappa = complex(l), complex(kappa)
    corr = 0j
    if kind == "rational":
        nu = complex(nu)
        func = _rational_integrand(m, l, kappa, nu)
        quad.update(nu=nu, kappa=kappa, l=l)
        specs = [build_contour("selberg_gamma_m", (m,), (), quad, lv) for lv in (level, level + 1)]
    else:
        x = complex(x)
        if kappa.imag != 0 or kappa.real <= 0:
            raise ValueError("the q Selberg integral is set up for kappa real positive")
        eps = -l.real / (2 * kappa.real)
        func = _q_integrand(m, l, kappa, x)
        one = _q_integrand(1, l, kappa, x)
        T = quad.pop("T", None) or line_extent(one, eps, tol=1e-17)
        quad.update(eps=eps, T=T)
        specs = [build_contour("selberg_mb", (m,), (), quad, lv) for lv in (level, level + 1)]
        poles = q_crossing_poles(l, kappa, eps)
        if poles and m > 1:
            raise ValueError("continuation past crossing poles is implemented for m = 1 only")
        corr = sum(sign * 2j * np.pi * complex(residue(func, p)[0]) for p, sign in poles)
    coarse, fine = (complex(integrate_product(c.paths, func)[0]) + corr for c in specs)
    return fine, abs(fine - coarse)


def q_crossing_poles(l, kappa, eps):
    """Poles of Gamma(s) right of the plane (+1) and of Gamma(-s - l/kappa) left of it (-1).

    Empty when Re l < 0; otherwise the continuation in l picks up their residues.
    """
    out = []
    n = 0
    while -n > eps:
        out.append((complex(-n), +1))
        n += 1
    n = 0
    while (-l / kappa + n).real < eps:
        out.append((complex(-l / kappa + n), -1))
        n += 1
    return out


def check_selberg(kind: str, m: int, l, kappa, nu=None, x=None, tolerance: float = 1e-6,
                  quadrature=None) -> VerificationReport:
    """Relative difference between quadrature and closed form."""
    frame = {"kind": kind, "m": m, "l": complex(l), "kappa": complex(kappa),
             "nu": None if nu is None else complex(nu), "x": None if x is None else complex(x)}
    rep = VerificationReport(f"selberg:{kind}:m={m}", frame, 1, 0, tolerance)
    t0 = time.perf_counter()
    quad_val, err = selberg_integrate(kind, m, l, kappa, nu, x, quadrature)
    closed = selberg_closed_form(kind, m, l, kappa, nu, x)
    rep.notes.update(quadrature=quad_val, closed_form=closed, quadrature_error=err)
    rep.add(abs(quad_val - closed) / abs(closed), frame)
    rep.wall_time = time.perf_counter() - t0
    return rep


def check_nu_scaling(m: int, l, kappa, nus=(1.7, 3.1), tolerance: float = 1e-6,
                     quadrature=None) -> VerificationReport:
    """I(nu_2)/I(nu_1) by quadrature against (nu_2/nu_1)^(m(l-m+1)/kappa)."""
    nu1, nu2 = (complex(v) for v in nus)
    frame = {"m": m, "l": complex(l), "kappa": complex(kappa), "nus": [nu1, nu2]}
    rep = VerificationReport(f"selberg:nu-scaling:m={m}", frame, 2, 0, tolerance)
    t0 = time.perf_counter()
    i1, _ = selberg_integrate("rational", m, l, kappa, nu=nu1, quadrature=quadrature)
    i2, _ = selberg_integrate("rational", m, l, kappa, nu=nu2, quadrature=quadrature)
    predicted = np.exp(selberg_exponent(m, l, kappa) * (np.log(nu2) - np.log(nu1)))
    rep.notes.update(ratio=i2 / i1, predicted=complex(predicted))
    rep.add(abs(i2 / i1 - predicted) / abs(predicted), frame)
    rep.wall_time = time.perf_counter() - t0
    return rep
