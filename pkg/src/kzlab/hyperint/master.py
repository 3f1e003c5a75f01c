"""Master functions of the gl_2 integral solutions and their branch conventions.

All three flavors are returned through their logarithm ``L`` so that
``exp(L)`` is the integrand factor actually integrated: Phi^(1/kappa) for the
rational master function, Psi^(1/kappa) for the trigonometric one, and the
Gamma-product q-master function itself.

Multivalued pieces are evaluated with explicit cut placements chosen so that
no cut meets the contours built in :mod:`kzlab.hyperint.contours`; the
function :func:`branch_jumps` checks that claim node by node.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..special import loggamma

FLAVORS = ("rational", "trig", "q")


def _ct(xs) -> tuple[complex, ...]:
    return tuple(complex(x) for x in xs)


def rel_log(w, ref):
    """log w with arg w taken within pi of ``ref``."""
    w = np.asarray(w, dtype=complex)
    ref = np.asarray(ref, dtype=float)
    return np.log(np.abs(w)) + 1j * (ref + np.angle(w * np.exp(-1j * ref)))


def cut_log(w, ref):
    """log w with ref - 2 pi < arg w <= ref (the cut runs along direction ``ref``)."""
    w = np.asarray(w, dtype=complex)
    ref = np.asarray(ref, dtype=float)
    th = np.angle(w * np.exp(-1j * ref))
    th = np.where(th > 0, th - 2 * np.pi, th)
    return np.log(np.abs(w)) + 1j * (ref + th)


def ordered_args(points, strict: bool = True) -> np.ndarray:
    """Arguments with arg p_1 principal and arg p_1 < arg p_2 < ... < arg p_1 + 2 pi.

    With ``strict`` a ValueError is raised when the points are not ordered
    counterclockwise or when two of them lie on one ray from the origin.
    """
    pts = [complex(p) for p in points]
    if any(p == 0 for p in pts):
        raise ValueError("points must be nonzero")
    base = float(np.angle(pts[0]))
    out = [base]
    for p in pts[1:]:
        a = float(np.angle(p * np.exp(-1j * base)))
        if a <= 0:
            a += 2 * np.pi
        if strict and (a <= out[-1] - base or a >= 2 * np.pi or abs(a) < 1e-12):
            raise ValueError("points must satisfy arg p_1 < ... < arg p_n < arg p_1 + 2 pi")
        out.append(base + a)
    return np.array(out)


def lambda_logs(lam) -> tuple[complex, complex, complex]:
    """(log lam_1, log lam_2, log(lam_1 - lam_2)) with 0 < arg(lam_2/lam_1) < 2 pi.

    arg lam_1 is principal and arg(lam_1 - lam_2) lies within pi of arg lam_1,
    the same rules the trigonometric side applies to its points.
    """
    la1, la2 = complex(lam[0]), complex(lam[1])
    args = ordered_args((la1, la2), strict=False)
    if abs(np.angle(la2 / la1)) < 1e-14 and (la2 / la1).real > 0:
        raise ValueError("lam_2/lam_1 must not be real positive")
    l1 = complex(np.log(abs(la1)) + 1j * args[0])
    l2 = complex(np.log(abs(la2)) + 1j * args[1])
    l12 = complex(rel_log(la1 - la2, args[0]))
    return l1, l2, l12


def loop_of_variable(d) -> list[int]:
    """Index j of the point z_j whose loop carries t_a (t_{a + d_<j} sits on loop j)."""
    out = []
    for j, dj in enumerate(d):
        out.extend([j] * int(dj))
    return out


@dataclass(frozen=True)
class MasterFunctionSpec:
    """Data of a master function of r integration variables.

    ``d`` assigns the variables to the points (needed by the trigonometric
    branch rules); when omitted every variable uses the principal rules.
    """

    flavor: str
    r: int
    z: tuple[complex, ...]
    lam: tuple[complex, complex]
    l: tuple[complex, ...]
    m: tuple[complex, complex]
    kappa: complex
    d: tuple[int, ...] | None = None

    @classmethod
    def of(cls, flavor, z, lam, l, m, kappa, r=None, d=None):
        if flavor not in FLAVORS:
            raise ValueError(f"unknown master flavor {flavor!r}")
        if r is None:
            if d is None:
                raise ValueError("give r or d")
            r = int(sum(d))
        if d is not None:
            d = tuple(int(x) for x in d)
            if sum(d) != r or len(d) != len(z):
                raise ValueError("d must have one entry per point and sum to r")
        return cls(flavor, int(r), _ct(z), _ct(lam), _ct(l), _ct(m), complex(kappa), d)

    @property
    def n(self) -> int:
        return len(self.z)

    def to_json(self) -> dict:
        return {"flavor": self.flavor, "r": self.r, "z": list(self.z), "lam": list(self.lam),
                "l": list(self.l), "m": list(self.m), "kappa": self.kappa,
                "d": list(self.d) if self.d is not None else None}


def _point_args(spec: MasterFunctionSpec):
    return ordered_args(spec.z)


def branch_logs(spec: MasterFunctionSpec, t) -> dict[str, np.ndarray]:
    """Logarithms of the multivalued t-dependent factors, keyed by factor name."""
    t = np.asarray(t, dtype=complex)
    out: dict[str, np.ndarray] = {}
    if spec.flavor == "rational":
        for a in range(spec.r):
            for i, zi in enumerate(spec.z):
                out[f"t{a}-z{i}"] = cut_log(t[..., a] - zi, 0.0)
            for b in range(a + 1, spec.r):
                out[f"t{a}-t{b}"] = np.log(t[..., a] - t[..., b])
    elif spec.flavor == "trig":
        zargs = _point_args(spec)
        owner = loop_of_variable(spec.d) if spec.d is not None else None
        targs = []
        for a in range(spec.r):
            ref = zargs[owner[a]] if owner is not None else 0.0
            lt = rel_log(t[..., a], ref)
            out[f"t{a}"] = lt
            targs.append(lt.imag)
            for i, zi in enumerate(spec.z):
                out[f"t{a}-z{i}"] = cut_log(t[..., a] - zi, zargs[i])
        for a in range(spec.r):
            for b in range(a + 1, spec.r):
                out[f"t{a}-t{b}"] = rel_log(t[..., a] - t[..., b], targs[a])
    return out


def _constant_log(spec: MasterFunctionSpec) -> complex:
    """Log of the t-independent part (before division by kappa for Phi, Psi)."""
    z, l, m = spec.z, spec.l, spec.m
    n = spec.n
    if spec.flavor == "rational":
        la1, la2 = spec.lam
        out = la1 * sum(l[i] * z[i] for i in range(n)) - spec.r * np.log(la1 - la2)
        for i in range(n):
            for j in range(i + 1, n):
                out += l[i] * l[j] * np.log(z[i] - z[j])
        return complex(out)
    if spec.flavor == "trig":
        la1, la2 = spec.lam
        zargs = _point_args(spec)
        out = 0j
        for i in range(n):
            out += l[i] * (la1 - m[0] + l[i] / 2) * rel_log(z[i], zargs[i])
            for j in range(i + 1, n):
                out += l[i] * l[j] * rel_log(z[i] - z[j], zargs[i])
        return complex(out)
    lg1, lg2, lg12 = lambda_logs(spec.lam)
    r = spec.r
    e1 = r / 2 + sum(z[i] * l[i] - l[i] ** 2 / 2 for i in range(n))
    return complex((e1 * lg1 + (r / 2) * lg2 - r * lg12) / spec.kappa)


def master_log(spec: MasterFunctionSpec, t) -> np.ndarray:
    """log of the integrand factor at t (array of shape (..., r))."""
    t = np.asarray(t, dtype=complex)
    if t.shape[-1] != spec.r:
        raise ValueError(f"expected {spec.r} integration variables, got {t.shape[-1]}")
    shape = t.shape[:-1]
    k = spec.kappa
    l = spec.l
    if spec.flavor == "q":
        lg1, lg2, _ = lambda_logs(spec.lam)
        out = np.full(shape, _constant_log(spec), dtype=complex)
        for a in range(spec.r):
            ta = t[..., a]
            out = out + ta * (lg2 - lg1) / k
            for i, zi in enumerate(spec.z):
                out = out + loggamma((ta - zi) / k) - loggamma((ta - zi + l[i]) / k)
            for b in range(a + 1, spec.r):
                tb = t[..., b]
                out = out + loggamma((ta - tb + 1) / k) - loggamma((ta - tb - 1) / k)
        return out
    logs = branch_logs(spec, t)
    out = np.full(shape, _constant_log(spec), dtype=complex)
    if spec.flavor == "rational":
        la1, la2 = spec.lam
        out = out - (la1 - la2) * t.sum(axis=-1)
        for a in range(spec.r):
            for i in range(spec.n):
                out = out - l[i] * logs[f"t{a}-z{i}"]
            for b in range(a + 1, spec.r):
                out = out + 2 * logs[f"t{a}-t{b}"]
    else:
        la1, la2 = spec.lam
        m1, m2 = spec.m
        p = la2 - la1 + m1 - m2 + 1
        for a in range(spec.r):
            out = out + p * logs[f"t{a}"]
            for i in range(spec.n):
                out = out - l[i] * logs[f"t{a}-z{i}"]
            for b in range(a + 1, spec.r):
                out = out + 2 * logs[f"t{a}-t{b}"]
    return out / k


def master_value(spec: MasterFunctionSpec, t) -> np.ndarray:
    """Phi^(1/kappa), Psi^(1/kappa) or the q-master function at t."""
    t = np.asarray(t, dtype=complex)
    if spec.r:
        for a in range(spec.r):
            if np.any(t[..., a][..., None] == np.array(spec.z)):
                raise ValueError("t lies on the singular divisor t_a = z_i")
    return np.exp(master_log(spec, t))


def branch_jumps(spec: MasterFunctionSpec, nodes, var: int, fixed=None) -> float:
    """Largest jump of arg between adjacent nodes, over all multivalued factors.

    ``nodes`` is the ordered node sequence of the contour carrying t_var; the
    other variables are held at ``fixed`` (a length-r vector).  A value well
    below pi means no branch cut is crossed.
    """
    nodes = np.asarray(nodes, dtype=complex)
    base = np.zeros(spec.r, dtype=complex) if fixed is None else np.asarray(fixed, dtype=complex)
    t = np.tile(base, (nodes.size, 1))
    t[:, var] = nodes
    worst = 0.0
    for name, val in branch_logs(spec, t).items():
        if f"t{var}" not in name.split("-"):
            continue
        if val.size > 1:
            worst = max(worst, float(np.abs(np.diff(val.imag)).max()))
    return worst
