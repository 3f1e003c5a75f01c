"""Integral solutions U (loops), U-tilde (radial loops) and U-hat (Mellin-Barnes line).

Coordinates are taken in the basis v_d = e_21^(d_1) v ... e_21^(d_n) v of the
gl_2 weight space, which is the divided-power basis of
:func:`kzlab.glk_rep.enumerate_basis` with k = 2, so solution vectors can be
fed directly to the operators of :mod:`kzlab.operators`.

The error estimate is the change between panel level L and L+1 (every panel
halved); the returned values are the level L+1 ones.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..glk_rep import TensorWeightSpace, enumerate_basis, is_nonneg_int
from .contours import ContourSpec, build_contour, line_path
from .master import MasterFunctionSpec, master_log
from .weights import weight_value

KIND_ALIASES = {"U": "U", "Ut": "Ut", "U~": "Ut", "Utilde": "Ut", "Uh": "Uh", "U^": "Uh", "Uhat": "Uh"}
MAX_R = {"U": 2, "Ut": 1, "Uh": 1}


@dataclass
class SolutionVector:
    kind: str
    d: tuple[int, ...]
    space: TensorWeightSpace
    values: np.ndarray
    abs_error: float = 0.0
    metadata: dict = field(default_factory=dict)

    @property
    def rel_error(self) -> float:
        scale = float(np.abs(self.values).max()) if self.values.size else 0.0
        return self.abs_error / scale if scale else self.abs_error

    def coordinate(self, d) -> complex:
        return complex(self.values[self.space.index[tuple(int(x) for x in d)]])

    def to_json(self) -> dict:
        return {"kind": self.kind, "d": list(self.d),
                "basis": [list(key) for key in self.space.lower],
                "values": list(self.values), "abs_error": self.abs_error,
                "rel_error": self.rel_error, "metadata": self.metadata}


def _kind(kind: str) -> str:
    try:
        return KIND_ALIASES[kind]
    except KeyError:
        raise ValueError(f"unknown solution kind {kind!r}") from None


def gl2_space(l, m) -> TensorWeightSpace:
    """(V_l1 x ... x V_ln)[m1, m2]; basis keys are the vectors d."""
    if len(m) != 2:
        raise ValueError("integral solutions are built for gl_2 (two weights m)")
    return enumerate_basis(2, len(l), l, m)


def integrate_product(paths, func, chunk: int = 128) -> np.ndarray:
    """Sum of weights * func over a product of 1-d paths (r = 1 or 2)."""
    if len(paths) == 1:
        p = paths[0]
        vals = func(p.nodes[:, None])
        return np.tensordot(p.weights, vals, axes=(0, 0))
    if len(paths) != 2:
        raise ValueError("product quadrature is implemented for r <= 2")
    p1, p2 = paths
    total = None
    for start in range(0, p1.size, chunk):
        a = p1.nodes[start:start + chunk]
        t = np.empty((a.size, p2.size, 2), dtype=complex)
        t[..., 0] = a[:, None]
        t[..., 1] = p2.nodes[None, :]
        vals = func(t)
        part = np.tensordot(p1.weights[start:start + chunk], np.tensordot(p2.weights, vals, axes=(0, 1)), axes=(0, 0))
        total = part if total is None else total + part
    return total


def residue(func, pole: complex, radius: float = 1e-3, nodes: int = 64):
    """Residue of func at pole from the trapezoid rule on a small circle."""
    th = 2 * np.pi * np.arange(nodes) / nodes
    t = pole + radius * np.exp(1j * th)
    vals = func(t[:, None])
    return np.tensordot(radius * np.exp(1j * th) / nodes, vals, axes=(0, 0))


def line_extent(func, eps: float, tol: float = 1e-18, step: float = 1.0, ymax: float = 4000.0) -> float:
    """Half-length T beyond which |func| on Re t = eps stays below tol * max."""
    ys = np.arange(0.0, ymax + step, step)
    y = np.concatenate([-ys[::-1], ys[1:]])
    with np.errstate(all="ignore"):
        vals = np.abs(func((eps + 1j * y)[:, None]))
    mags = vals.reshape(y.size, -1).max(axis=1)
    mags = np.where(np.isfinite(mags), mags, 0.0)
    peak = mags.max()
    if peak == 0:
        raise ValueError("integrand vanishes on the whole line")
    big = np.abs(y[mags > tol * peak])
    T = float(big.max()) + 2.0
    if T >= ymax:
        raise ValueError("Mellin-Barnes integrand does not decay along the line")
    return T


def mb_poles(z, l, kappa, eps):
    """Pole sequences crossing the line Re t = eps, with their correction signs.

    The left sequences z_j - kappa*n must stay left of the contour and the right
    sequences z_j - l_j + kappa*n right of it; any pole on the wrong side is
    picked up by a residue (+1 for left poles, -1 for right poles).
    """
    kappa = float(np.real(kappa))
    out = []
    for zj, lj in zip(z, l):
        n = 0
        while (zj - kappa * n).real > eps:
            out.append((complex(zj - kappa * n), +1))
            n += 1
        n = 0
        while (zj - lj + kappa * n).real < eps:
            out.append((complex(zj - lj + kappa * n), -1))
            n += 1
    return out


def _default_eps(z, l, kappa):
    neg = [-complex(x).real for x in l]
    eps = 0.5 * min(neg) if min(neg) > 0 else 0.3
    cand = []
    for zj, lj in zip(z, l):
        for n in range(-3, 4):
            cand.extend([(zj - kappa * n).real, (zj - lj + kappa * n).real])
    for _ in range(200):
        if min(abs(eps - c) for c in cand) > 0.05:
            return eps
        eps += 0.037
    return eps


def _validate(kind, d, z, lam, l, m, kappa):
    space = gl2_space(l, m)
    d = tuple(int(x) for x in d)
    if d not in space.index:
        raise ValueError(f"d={d} is not a basis index of this weight space")
    if not is_nonneg_int(m[1]):
        raise ValueError("m_2 must be a nonnegative integer")
    r = int(round(complex(m[1]).real))
    if r > MAX_R[kind]:
        raise ValueError(f"{kind} is implemented for m_2 <= {MAX_R[kind]}")
    if len(z) != len(l) or len(lam) != 2:
        raise ValueError("need one z per weight l and two lambdas")
    return space, d, r


def _vector_integrand(flavor_w, spec, space, d, z, l, kappa, scalar_w=None):
    basis = space.lower

    def func(t):
        with np.errstate(over="ignore", invalid="ignore"):
            base = np.exp(master_log(spec, t))
        if scalar_w is not None:
            base = base * weight_value("W", d, t, z, l, kappa)
        out = np.empty(t.shape[:-1] + (len(basis),), dtype=complex)
        for q, p in enumerate(basis):
            out[..., q] = base * weight_value(flavor_w, p, t, z, l, kappa)
        return out

    return func


def _contour(kind, d, z, lam, l, m, kappa, quad, level, eps=None, T=None):
    params = dict(quad)
    if kind == "U":
        params.update(lam=lam, l=l, kappa=kappa)
        return build_contour("gamma_d", d, z, params, level)
    if kind == "Ut":
        p = (lam[1] - lam[0] + m[0] - m[1] + 1 - sum(l)) / kappa
        params.setdefault("tail_power", float(np.real(p)))
        return build_contour("delta_d", d, z, params, level)
    params.update(eps=eps, T=T)
    return build_contour("mb_plane", d, z, params, level)


def integrate_solution(kind: str, d, z, lam, l, m, kappa, quadrature: dict | None = None) -> SolutionVector:
    """Evaluate U_d, U-tilde_d or U-hat_d at one parameter point.

    ``quadrature`` may set order, level, h, nest, eps (U-hat line), eps_tail.
    """
    kind = _kind(kind)
    quad = dict(quadrature or {})
    level = int(quad.pop("level", 0))
    z = tuple(complex(x) for x in z)
    lam = tuple(complex(x) for x in lam)
    l = tuple(complex(x) for x in l)
    m = tuple(complex(x) for x in m)
    kappa = complex(kappa)
    space, d, r = _validate(kind, d, z, lam, l, m, kappa)
    flavor = {"U": "rational", "Ut": "trig", "Uh": "q"}[kind]
    spec = MasterFunctionSpec.of(flavor, z, lam, l, m, kappa, d=d)
    meta: dict = {"kind": kind, "r": r, "flavor": flavor}
    if kind == "Uh":
        if abs(kappa.imag) > 0 or kappa.real <= 0:
            raise ValueError("U-hat needs kappa real positive")
        kappa = complex(kappa.real)
    if r == 0:
        val = np.exp(master_log(spec, np.zeros((0,), dtype=complex)))
        return SolutionVector(kind, d, space, np.array([complex(val)]), 0.0,
                              {**meta, "contour": None, "note": "no integration variables"})
    if kind == "Uh":
        func = _vector_integrand("what", spec, space, d, z, l, kappa.real, scalar_w=True)
        eps = float(quad.pop("eps", _default_eps(z, l, kappa.real)))
        T = float(quad.pop("T", line_extent(func, eps)))
        poles = mb_poles(z, l, kappa.real, eps)
        corr = np.zeros(space.dim, dtype=complex)
        for pole, sign in poles:
            corr = corr + sign * 2j * np.pi * residue(func, pole)
        meta.update(strategy="line Re t = eps plus residues of poles on the wrong side",
                    residues=[[p, s] for p, s in poles])
        contours = [_contour(kind, d, z, lam, l, m, kappa, quad, lv, eps, T) for lv in (level, level + 1)]
    else:
        func = _vector_integrand("w", spec, space, d, z, l, kappa)
        corr = 0.0
        contours = [_contour(kind, d, z, lam, l, m, kappa, quad, lv) for lv in (level, level + 1)]
    coarse, fine = (integrate_product(c.paths, func) + corr for c in contours)
    err = float(np.abs(fine - coarse).max())
    if not np.all(np.isfinite(fine)):
        raise ValueError("quadrature produced non-finite values")
    meta["contour"] = contours[1].to_json()
    return SolutionVector(kind, d, space, fine, err, meta)


def solution_residuals(d, z, lam, l, m, kappa, h: float = 1e-3, quadrature=None) -> dict:
    """Finite-difference residuals of the rational KZ and DD equations on U_d.

    Central differences with one Richardson step; each residual is
    |kappa dU - A U| / (|kappa dU| + |A U| + |kappa| |U|) in the max norm.
    The last term keeps the ratio meaningful when both sides vanish.
    """
    from ..operators import Point, dd_coeff, kz_coeff

    base = integrate_solution("U", d, z, lam, l, m, kappa, quadrature)
    space = base.space
    point = Point.of(z, lam, kappa)

    def at(zz, ll):
        return integrate_solution("U", d, zz, ll, l, m, kappa, quadrature).values

    def deriv(which, idx):
        def shifted(delta):
            zz, ll = list(z), list(lam)
            (zz if which == "z" else ll)[idx] += delta
            return at(zz, ll)
        d1 = (shifted(h) - shifted(-h)) / (2 * h)
        d2 = (shifted(2 * h) - shifted(-2 * h)) / (4 * h)
        return (4 * d1 - d2) / 3

    floor = abs(kappa) * float(np.abs(base.values).max())

    def rel(lhs, rhs):
        return float(np.abs(lhs - rhs).max() / (np.abs(lhs).max() + np.abs(rhs).max() + floor))

    out = {}
    for i in range(len(z)):
        lhs = kappa * deriv("z", i)
        rhs = kz_coeff(space, i, "rational")(point) @ base.values
        out[f"KZ z{i}"] = rel(lhs, rhs)
    for a in range(2):
        lhs = kappa * deriv("lam", a)
        rhs = dd_coeff(space, a, "rational")(point) @ base.values
        out[f"DD lam{a}"] = rel(lhs, rhs)
    return out
