"""Integration contours as Gauss-Legendre node sets.

A contour is a product of one-dimensional paths, one per integration
variable.  Loops come in from infinity along a ray at height +h above the
line through their center, turn around the center on a half circle of
radius h, and leave at height -h (counterclockwise).  Nested loops around
one center have heights h, nest*h, nest^2*h, ...; t_1 takes the innermost.

Mellin-Barnes paths are vertical lines Re t = eps split into unit panels.
Refinement ``level`` splits every panel into 2**level equal parts.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from .master import loop_of_variable, ordered_args

KINDS = ("gamma_d", "delta_d", "mb_plane", "selberg_gamma_m", "selberg_mb")

DEFAULTS = {
    "order": 30,
    "nest": 1.5,
    "h_fraction": 0.2,
    "h_max": 0.5,
    "eps_tail": 1e-16,
    "growth": 2.0,
}


@lru_cache(maxsize=None)
def _gl(order: int):
    x, w = leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_nodes(edges, order: int, level: int = 0):
    """Gauss-Legendre nodes and weights on consecutive panels [e_i, e_i+1]."""
    edges = np.asarray(edges, dtype=float)
    if level:
        fine = [edges[0]]
        for a, b in zip(edges[:-1], edges[1:]):
            fine.extend(np.linspace(a, b, 2 ** level + 1)[1:])
        edges = np.array(fine)
    x, w = _gl(order)
    lo, hi = edges[:-1, None], edges[1:, None]
    nodes = (0.5 * (lo + hi) + 0.5 * (hi - lo) * x).ravel()
    weights = (0.5 * (hi - lo) * w).ravel()
    return nodes, weights


@dataclass(frozen=True)
class Path:
    """Ordered nodes of a 1-d path with complex weights dt."""

    nodes: np.ndarray
    weights: np.ndarray
    label: str
    anchor: complex

    @property
    def size(self) -> int:
        return self.nodes.size


@dataclass(frozen=True)
class ContourSpec:
    kind: str
    d: tuple[int, ...]
    geometry: dict
    order: int
    level: int
    paths: tuple[Path, ...]
    residues: tuple[tuple[complex, int], ...] = field(default=())

    @property
    def r(self) -> int:
        return len(self.paths)

    def to_json(self) -> dict:
        return {"kind": self.kind, "d": list(self.d), "geometry": self.geometry,
                "order": self.order, "level": self.level,
                "nodes": [p.size for p in self.paths],
                "residue_corrections": len(self.residues)}


def radial_edges(h: float, R: float, growth: float, max_width: float = np.inf):
    """Panel edges on [0, R]: steps of h near the center, then geometric growth."""
    edges = [0.0]
    x = 0.0
    while x < R:
        step = max(h, (growth - 1.0) * x) if x >= 2.0 else h
        step = min(step, max_width)
        x = min(x + step, R)
        edges.append(x)
    return np.array(edges)


def loop_path(center: complex, direction: complex, h: float, R: float, order: int,
              level: int = 0, growth: float = 2.0, max_width: float = np.inf,
              label: str = "") -> Path:
    """Counterclockwise loop around ``center`` from infinity along ``direction``."""
    direction = complex(direction) / abs(direction)
    x, wx = panel_nodes(radial_edges(h, R, growth, max_width), order, level)
    cap_t, cap_w = panel_nodes(np.linspace(np.pi / 2, 3 * np.pi / 2, 5), order, level)
    upper = center + direction * (x[::-1] + 1j * h)
    upper_w = -direction * wx[::-1]
    cap = center + direction * h * np.exp(1j * cap_t)
    cap_w = direction * 1j * h * np.exp(1j * cap_t) * cap_w
    lower = center + direction * (x - 1j * h)
    lower_w = direction * wx
    nodes = np.concatenate([upper, cap, lower])
    weights = np.concatenate([upper_w, cap_w, lower_w.astype(complex)])
    return Path(nodes, weights, label or f"loop({center:.3g})", complex(center - direction * h))


def line_path(eps: float, T: float, order: int, level: int = 0, width: float = 1.0,
              label: str = "") -> Path:
    """Upward vertical line Re t = eps, |Im t| <= T, unit panels by default."""
    npan = max(1, int(np.ceil(2 * T / width)))
    y, wy = panel_nodes(np.linspace(-T, T, npan + 1), order, level)
    return Path(eps + 1j * y, 1j * wy.astype(complex), label or f"line(Re={eps:.3g})", complex(eps))


def _params(params):
    out = dict(DEFAULTS)
    if params:
        out.update(params)
    return out


def _exp_tail(nu_re: float, extra: float, eps_tail: float) -> float:
    """Length beyond which e^{-nu x} times a mild power is below eps_tail."""
    return (-np.log(eps_tail) + 5.0 + extra) / nu_re


def build_contour(kind: str, d, z=(), params=None, level: int = 0) -> ContourSpec:
    """Build a contour of the given kind.

    kind           d means                 params used
    gamma_d        loop counts per point   lam, l, kappa (tail length), h
    delta_d        loop counts per point   tail_power (radial decay exponent), h
    mb_plane       loop counts per point   eps, T
    selberg_gamma_m  (m,)                  nu, l, kappa, h
    selberg_mb     (m,)                    eps, T
    """
    if kind not in KINDS:
        raise ValueError(f"unknown contour kind {kind!r}")
    p = _params(params)
    order = int(p["order"])
    d = tuple(int(x) for x in d)
    z = [complex(x) for x in z]
    r = sum(d)
    geom: dict = {}
    paths: list[Path] = []
    if kind == "gamma_d":
        if len(d) != len(z):
            raise ValueError("d needs one entry per point")
        im = [x.imag for x in z]
        if any(b <= a for a, b in zip(im, im[1:])):
            raise ValueError("gamma_d contours need Im z_1 < ... < Im z_n")
        lam, kappa = p["lam"], complex(p["kappa"])
        nu = (complex(lam[0]) - complex(lam[1])) / kappa
        if nu.real <= 0:
            raise ValueError("gamma_d contours need Re((lam_1 - lam_2)/kappa) > 0")
        gaps = [b - a for a, b in zip(im, im[1:])]
        if p.get("h"):
            h = float(p["h"])
        elif gaps:
            h = min(p["h_max"], p["h_fraction"] * min(gaps))
        else:
            h = p["h_max"]
        if max(d, default=0) > 1 and h * p["nest"] ** (max(d) - 1) >= 0.5 * min(gaps, default=np.inf):
            raise ValueError("nested loops would overlap; lower h")
        lsum = sum(abs(complex(x)) for x in p.get("l", ())) / abs(kappa)
        tail = _exp_tail(nu.real, lsum * np.log(2 + 40 / nu.real) + r * 2.0, p["eps_tail"])
        max_width = max(h, 4.0 / nu.real)
        owner = loop_of_variable(d)
        counts = [0] * len(z)
        for a, j in enumerate(owner):
            ha = h * p["nest"] ** counts[j]
            counts[j] += 1
            R = tail + max(0.0, -z[j].real + max(x.real for x in z))
            paths.append(loop_path(z[j], 1.0, ha, R, order, level, p["growth"], max_width,
                                   label=f"t{a} around z{j}"))
        geom = {"h": h, "nest": p["nest"], "tail": tail, "max_width": max_width}
    elif kind == "delta_d":
        if len(d) != len(z):
            raise ValueError("d needs one entry per point")
        args = ordered_args(z)
        power = float(p["tail_power"])
        if power >= 0:
            raise ValueError("delta_d loops need a decaying integrand (tail power < 0)")
        radial = min(1e150, (p["eps_tail"] * abs(power)) ** (1.0 / power))
        owner = loop_of_variable(d)
        counts = [0] * len(z)
        for a, j in enumerate(owner):
            direction = np.exp(1j * args[j])
            others = [abs((zz * np.conj(direction)).imag) for i, zz in enumerate(z)
                      if i != j and (zz * np.conj(direction)).real > 0]
            dist = min(others + [abs(z[j])])
            h = p.get("h") or min(p["h_max"] * abs(z[j]), p["h_fraction"] * dist)
            ha = h * p["nest"] ** counts[j]
            counts[j] += 1
            if ha >= abs(z[j]):
                raise ValueError("delta loop would enclose the origin")
            paths.append(loop_path(z[j], direction, ha, radial, order, level, p["growth"],
                                   label=f"t{a} around z{j}"))
        geom = {"radial_extent": radial, "nest": p["nest"], "tail_power": power}
    elif kind in ("mb_plane", "selberg_mb"):
        eps = float(p["eps"])
        T = float(p.get("T", 60.0))
        m = r if kind == "mb_plane" else d[0]
        for a in range(m):
            paths.append(line_path(eps, T, order, level, label=f"t{a} on Re t = {eps:.4g}"))
        geom = {"eps": eps, "T": T}
    else:
        m = d[0]
        nu, kappa = complex(p["nu"]), complex(p["kappa"])
        if nu.real <= 0:
            raise ValueError("Selberg loops need Re nu > 0")
        h = p.get("h") or 0.4
        tail = _exp_tail(nu.real, abs(complex(p.get("l", 0)) / kappa) * np.log(2 + 40 / nu.real), p["eps_tail"])
        max_width = max(h, 4.0 / nu.real)
        for a in range(m):
            paths.append(loop_path(0.0, 1.0, h * p["nest"] ** a, tail, order, level, p["growth"],
                                   max_width, label=f"s{a} around 0"))
        geom = {"h": h, "nest": p["nest"], "tail": tail}
    return ContourSpec(kind, d, geom, order, level, tuple(paths))
