"""Numerical checks of the integral identities for k = n = 2.

gauss2F1   Mellin-Barnes line, Euler integral and power series of 2F1 agree
           (a fourth route, the half-line integral over [1, inf), is reported too).
dualhint   A_b(l, m) U_b  =  A_b(m, l) phi^-1 U'_b           (loops on both sides)
dualqhint  A-hat_b(l, m) U-hat_b  =  A-tilde_b(m, l) G phi^-1 U-tilde'_b
           with G = prod_{s<l2} Gamma((z1-z2+s-l1)/kappa) / Gamma((z1-z2+s+1)/kappa)

The primed solutions live on (V_m1 x V_m2)[l1, l2] with the roles of z and
lambda exchanged.  phi^-1 sends the coordinate at d' = (l2-b, b) to the
coordinate at d = (m2-b, b).
"""
from __future__ import annotations

import itertools
import time

import numpy as np
from scipy.special import roots_jacobi

from ..report import VerificationReport
from ..special import loggamma
from .coefficients import duality_coefficient
from .solutions import (
    SolutionVector,
    gl2_space,
    integrate_product,
    integrate_solution,
    line_extent,
)
from .contours import line_path

IDENTITIES = ("gauss2F1", "dualhint", "dualqhint")


def _lg(x) -> complex:
    v = complex(loggamma(complex(x)))
    if not np.isfinite(v.real):
        raise ValueError(f"Gamma pole at {x}")
    return v


# --------------------------------------------------------------------------
# Gauss 2F1


def check_2f1_region(alpha, beta, gamma, x):
    alpha, beta, gamma, x = (complex(v) for v in (alpha, beta, gamma, x))
    if not (gamma.real > alpha.real > 0 and beta.real > 0):
        raise ValueError("need Re gamma > Re alpha > 0 and Re beta > 0")
    if x.imag == 0 and x.real >= 0:
        raise ValueError("need -pi < arg(-x) < pi")
    if abs(x) >= 1:
        raise ValueError("the power series route needs |x| < 1")


def hyp2f1_series(alpha, beta, gamma, x, tol: float = 1e-18, max_terms: int = 100000) -> complex:
    """Partial sums of sum (alpha)_n (beta)_n / ((gamma)_n n!) x^n."""
    alpha, beta, gamma, x = (complex(v) for v in (alpha, beta, gamma, x))
    if abs(x) >= 1:
        raise ValueError("series needs |x| < 1")
    term = 1.0 + 0j
    total = term
    for n in range(max_terms):
        term *= (alpha + n) * (beta + n) / ((gamma + n) * (n + 1)) * x
        total += term
        if abs(term) < tol * abs(total) and n > 3:
            return total
    raise ValueError("series did not converge")


def hyp2f1_mellin_barnes(alpha, beta, gamma, x, order: int = 30, level: int = 0):
    """(1/2 pi i) G(gamma)/(G(alpha)G(beta)) int (-x)^s G(-s)G(s+alpha)G(s+beta)/G(s+gamma) ds.

    The line is Re s = -eps with eps half of min(Re alpha, Re beta).
    Returns (value, error estimate from panel halving).
    """
    alpha, beta, gamma, x = (complex(v) for v in (alpha, beta, gamma, x))
    lx = np.log(-x)
    eps = 0.5 * min(alpha.real, beta.real)

    def func(s):
        s = s[..., 0]
        val = np.exp(s * lx + loggamma(-s) + loggamma(s + alpha) + loggamma(s + beta) - loggamma(s + gamma))
        return val[..., None]

    T = line_extent(func, -eps, tol=1e-18)
    pre = np.exp(_lg(gamma) - _lg(alpha) - _lg(beta)) / (2j * np.pi)
    vals = [complex(integrate_product([line_path(-eps, T, order, lv)], func)[0]) * pre
            for lv in (level, level + 1)]
    return vals[1], abs(vals[1] - vals[0])


def _jacobi_integral(p, q, func, nodes):
    """int_0^1 u^p (1-u)^q func(u) du by Gauss-Jacobi (real p, q > -1)."""
    v, w = roots_jacobi(nodes, q, p)
    u = 0.5 * (1 + v)
    return complex(np.sum(w * func(u)) / 2 ** (p + q + 1))


def hyp2f1_euler(alpha, beta, gamma, x, nodes: int = 80):
    """G(gamma)/(G(alpha)G(gamma-alpha)) int_0^1 u^(alpha-1)(1-u)^(gamma-alpha-1)(1-ux)^-beta du."""
    alpha, beta, gamma, x = (complex(v) for v in (alpha, beta, gamma, x))
    if alpha.imag or gamma.imag:
        raise ValueError("the Gauss-Jacobi route needs real alpha and gamma")
    pre = np.exp(_lg(gamma) - _lg(alpha) - _lg(gamma - alpha))
    f = lambda u: np.exp(-beta * np.log(1 - u * x))
    vals = [pre * _jacobi_integral(alpha.real - 1, (gamma - alpha).real - 1, f, n) for n in (nodes, 2 * nodes)]
    return vals[1], abs(vals[1] - vals[0])


def hyp2f1_half_line(alpha, beta, gamma, x, nodes: int = 80):
    """(1-x)^(gamma-alpha-beta) G(gamma)/(G(alpha)G(gamma-alpha)) int_1^inf t^-beta (t-1)^(alpha-1) (t-x)^(beta-gamma) dt.

    Evaluated after t = 1/v, which turns it into a Gauss-Jacobi integral on [0, 1].
    """
    alpha, beta, gamma, x = (complex(v) for v in (alpha, beta, gamma, x))
    if alpha.imag or gamma.imag:
        raise ValueError("the Gauss-Jacobi route needs real alpha and gamma")
    pre = np.exp((gamma - alpha - beta) * np.log(1 - x) + _lg(gamma) - _lg(alpha) - _lg(gamma - alpha))
    f = lambda v: np.exp((beta - gamma) * np.log(1 - x * v))
    vals = [pre * _jacobi_integral((gamma - alpha).real - 1, alpha.real - 1, f, n) for n in (nodes, 2 * nodes)]
    return vals[1], abs(vals[1] - vals[0])


def check_gauss2f1(alpha, beta, gamma, x, tolerance: float = 1e-8) -> VerificationReport:
    check_2f1_region(alpha, beta, gamma, x)
    frame = {"alpha": complex(alpha), "beta": complex(beta), "gamma": complex(gamma), "x": complex(x)}
    rep = VerificationReport("identity:gauss2F1", frame, 1, 0, tolerance)
    t0 = time.perf_counter()
    routes = {
        "mellin_barnes": hyp2f1_mellin_barnes(alpha, beta, gamma, x),
        "euler": hyp2f1_euler(alpha, beta, gamma, x),
        "series": (hyp2f1_series(alpha, beta, gamma, x), 0.0),
        "half_line": hyp2f1_half_line(alpha, beta, gamma, x),
    }
    rep.notes["values"] = {k: v for k, (v, _) in routes.items()}
    rep.notes["quadrature_error"] = {k: e for k, (_, e) in routes.items()}
    pairs = {}
    for (a, (va, _)), (b, (vb, _)) in itertools.combinations(routes.items(), 2):
        pairs[f"{a}/{b}"] = abs(va - vb) / max(abs(va), abs(vb))
    rep.notes["pairwise"] = pairs
    rep.add(max(pairs.values()), frame)
    rep.wall_time = time.perf_counter() - t0
    return rep


# --------------------------------------------------------------------------
# dualities of integral solutions


def _int(x) -> int:
    return int(round(complex(x).real))


def phi_inverse(dual: SolutionVector, l, m) -> np.ndarray:
    """Map coordinates on (V_m1 x V_m2)[l1, l2] to (V_l1 x V_l2)[m1, m2] by v_b -> v_b."""
    space = gl2_space(l, m)
    l2, m2 = _int(l[1]), _int(m[1])
    out = np.zeros(space.dim, dtype=complex)
    for b in range(min(l2, m2) + 1):
        d, dp = (m2 - b, b), (l2 - b, b)
        if d in space.index and dp in dual.space.index:
            out[space.index[d]] = dual.values[dual.space.index[dp]]
    return out


def _setup(params):
    l = tuple(complex(x) for x in params["l"])
    m = tuple(complex(x) for x in params["m"])
    if len(l) != 2 or len(m) != 2:
        raise ValueError("the integral dualities are set up for k = n = 2")
    if abs(sum(l) - sum(m)) > 1e-12:
        raise ValueError("need l1 + l2 = m1 + m2")
    z = tuple(complex(x) for x in params["z"])
    lam = tuple(complex(x) for x in params["lam"])
    kappa = complex(params["kappa"])
    bs = params.get("b")
    if bs is None:
        bs = list(range(min(_int(l[1]), _int(m[1])) + 1))
    return l, m, z, lam, kappa, [int(b) for b in bs]


def _duality_report(identity, params, tolerance, sides):
    l, m, z, lam, kappa, bs = _setup(params)
    frame = {"l": list(l), "m": list(m), "z": list(z), "lam": list(lam), "kappa": kappa, "b": bs}
    rep = VerificationReport(f"identity:{identity}", frame, len(bs), 0, tolerance,
                             notes={"per_b": {}})
    t0 = time.perf_counter()
    for b in bs:
        lhs, rhs, err = sides(l, m, z, lam, kappa, b)
        scale = float(np.abs(lhs).max())
        res = float(np.abs(lhs - rhs).max() / scale)
        rep.notes["per_b"][str(b)] = {"lhs": list(lhs), "rhs": list(rhs), "residual": res,
                                      "quadrature_rel_error": err}
        rep.add(res, {"b": b})
    rep.wall_time = time.perf_counter() - t0
    return rep


def _dualhint_sides(quadrature):
    def sides(l, m, z, lam, kappa, b):
        l2, m2 = _int(l[1]), _int(m[1])
        u = integrate_solution("U", (m2 - b, b), z, lam, l, m, kappa, quadrature)
        up = integrate_solution("U", (l2 - b, b), lam, z, m, l, kappa, quadrature)
        lhs = duality_coefficient("A", b, l, m, kappa) * u.values
        rhs = duality_coefficient("A", b, m, l, kappa) * phi_inverse(up, l, m)
        return lhs, rhs, max(u.rel_error, up.rel_error)
    return sides


def _dualqhint_sides(quadrature):
    def sides(l, m, z, lam, kappa, b):
        l2, m2 = _int(l[1]), _int(m[1])
        uh = integrate_solution("Uh", (m2 - b, b), z, lam, l, m, kappa, quadrature)
        ut = integrate_solution("Ut", (l2 - b, b), lam, z, m, l, kappa, quadrature)
        g = sum(_lg((z[0] - z[1] + s - l[0]) / kappa) - _lg((z[0] - z[1] + s + 1) / kappa) for s in range(l2))
        lhs = duality_coefficient("Ahat", b, l, m, kappa) * uh.values
        rhs = duality_coefficient("Atilde", b, m, l, kappa) * np.exp(g) * phi_inverse(ut, l, m)
        return lhs, rhs, max(uh.rel_error, ut.rel_error)
    return sides


def check_identity(kind: str, params: dict, quadrature=None, tolerance: float | None = None) -> VerificationReport:
    """Evaluate both sides of one identity and report the relative residual."""
    if kind == "gauss2F1":
        return check_gauss2f1(params["alpha"], params["beta"], params["gamma"], params["x"],
                              1e-8 if tolerance is None else tolerance)
    if kind == "dualhint":
        return _duality_report(kind, params, 1e-6 if tolerance is None else tolerance,
                               _dualhint_sides(quadrature))
    if kind == "dualqhint":
        return _duality_report(kind, params, 1e-6 if tolerance is None else tolerance,
                               _dualqhint_sides(quadrature))
    raise ValueError(f"unknown identity {kind!r}")
