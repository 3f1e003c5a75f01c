"""(gl_k, gl_n) duality between KZ-type and dynamical-type operators.

S_k = (V_{l_1} x ... x V_{l_n})[m] over gl_k and S_n = (V_{m_1} x ... x V_{m_k})[l]
over gl_n share the basis indexed by k-by-n matrices d.  Both spaces are built
on the same list of matrices (transposed for S_n), so the identification phi
is the identity matrix.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .glk_rep import TensorWeightSpace, enumerate_basis, is_nonneg_int, transpose_space
from .operators import (
    Point,
    SingularPointError,
    b_series,
    c_scalar,
    dd_coeff,
    kz_coeff,
    qdd_factor,
    qkz_factor,
    r_matrix_on,
)
from .report import VerificationReport, residual, sample_point, sample_rng

PAIRS = ("nD", "hD", "ZQ", "QZ")


@dataclass(frozen=True)
class DualityFrame:
    k: int
    n: int
    l: tuple[complex, ...]
    m: tuple[complex, ...]
    space_k: TensorWeightSpace
    space_n: TensorWeightSpace

    @property
    def phi(self) -> np.ndarray:
        return np.eye(self.space_k.dim, dtype=complex)

    @property
    def dim(self) -> int:
        return self.space_k.dim

    @property
    def continued(self) -> bool:
        return not (is_nonneg_int(self.l[0]) and is_nonneg_int(self.m[0]))

    def to_json(self) -> dict:
        out = self.space_k.to_json()
        out["dim"] = self.dim
        return out


def build_frame(k: int, n: int, l, m) -> DualityFrame:
    sk = enumerate_basis(k, n, l, m)
    sn = transpose_space(sk)
    return DualityFrame(k, n, sk.l, sk.m, sk, sn)


def normalization_scalar(frame: DualityFrame, side: str, index: int, args, kappa) -> complex:
    """N_i^(n)(z) (side "n", args = z) or N_a^(k)(lam) (side "k", args = lam).

    Side "n" uses C^(n) scalars on the weight l; side "k" uses C^(k) on the weight m.
    """
    weights = frame.l if side == "n" else frame.m
    if side not in ("n", "k"):
        raise ValueError("side must be 'n' or 'k'")
    args = [complex(x) for x in args]
    out = 1.0 + 0j
    for j in range(index):
        out *= c_scalar(j, index, args[j] - args[index] - kappa, weights)
    for j in range(index + 1, len(args)):
        out /= c_scalar(index, j, args[index] - args[j], weights)
    return out


def _pair_matrices(frame: DualityFrame, pair: str, p: Point, control: bool):
    """Yield (lhs, rhs) matrix pairs for one sampled point."""
    sk, sn = frame.space_k, frame.space_n
    q = p.dual()
    if control and pair in ("nD", "hD"):
        q = Point(q.z, tuple(x + 1 for x in q.lam), q.kappa)
    flavor = "rational" if pair == "nD" else "trig"
    if pair in ("nD", "hD"):
        for i in range(frame.n):
            yield kz_coeff(sk, i, flavor)(p), dd_coeff(sn, i, flavor)(q)
        for a in range(frame.k):
            yield dd_coeff(sk, a, flavor)(p), kz_coeff(sn, a, flavor)(q)
    elif pair == "ZQ":
        for i in range(frame.n):
            scale = 1.0 if control else normalization_scalar(frame, "n", i, p.z, p.kappa)
            yield qkz_factor(sk, i)(p), scale * qdd_factor(sn, i)(q)
    elif pair == "QZ":
        for a in range(frame.k):
            scale = 1.0 if control else normalization_scalar(frame, "k", a, p.lam, p.kappa)
            yield scale * qdd_factor(sk, a)(p), qkz_factor(sn, a)(q)
    else:
        raise ValueError(f"unknown duality pair {pair!r}")


def check_duality_pair(frame: DualityFrame, pair: str, samples: int = 50, seed: int = 0,
                       kappa_policy="complex", tolerance: float = 1e-9,
                       control: bool = False) -> VerificationReport:
    """Compare both sides of one duality family at sampled points.

    With ``control`` the comparison is deliberately broken (dynamical variables
    of the dual side shifted by 1 for differential pairs, no N scalar for
    difference pairs) and is expected to fail.
    """
    tag = f"duality:{pair}" + (":control" if control else "")
    rep = VerificationReport(tag, frame.to_json(), samples, seed,
                             1e-2 if control else tolerance,
                             notes={"negative_control": control, "kappa_policy": str(kappa_policy)})
    t0 = time.perf_counter()
    for s in range(samples):
        p = sample_point(seed, tag, s, frame.n, frame.k, kappa_policy)
        worst = 0.0
        try:
            for lhs, rhs in _pair_matrices(frame, pair, p, control):
                val = residual(lhs, frame.phi.T @ rhs @ frame.phi)
                worst = max(worst, val)
        except SingularPointError as exc:
            rep.failures.append({"point": p.to_json(), "error": str(exc)})
            continue
        rep.add(worst, p)
    rep.wall_time = time.perf_counter() - t0
    return rep


def br_pairs(frame: DualityFrame):
    """Index pairs for which both sides of the B.C = R identities are defined."""
    sk, sn = frame.space_k, frame.space_n
    ab = [(a, b) for a in range(frame.k) for b in range(frame.k)
          if a != b and (b != 0 or not frame.continued)]
    ij = [(i, j) for i in range(frame.n) for j in range(frame.n)
          if i != j and (j != 0 or not frame.continued)]
    return ab, ij


def br_sides(frame: DualityFrame, t: complex, control: bool = False):
    """Yield (label, B.C side, R side) for all applicable pairs at one t."""
    sk, sn = frame.space_k, frame.space_n
    ab, ij = br_pairs(frame)
    for a, b in ab:
        c = 1.0 if control else c_scalar(a, b, t, frame.m)
        yield f"k{a}{b}", b_series(sk, a, b, t) * c, r_matrix_on(sn, a, b, t)
    for i, j in ij:
        c = 1.0 if control else c_scalar(i, j, t, frame.l)
        yield f"n{i}{j}", b_series(sn, i, j, t) * c, r_matrix_on(sk, i, j, t)


def check_br(frame: DualityFrame, samples: int = 50, seed: int = 0, tolerance: float = 1e-9,
             control: bool = False) -> VerificationReport:
    tag = "duality:BR" + (":control" if control else "")
    rep = VerificationReport(tag, frame.to_json(), samples, seed, 1e-2 if control else tolerance,
                             notes={"negative_control": control})
    ab, ij = br_pairs(frame)
    rep.notes["pairs"] = {"k": [list(x) for x in ab], "n": [list(x) for x in ij]}
    t0 = time.perf_counter()
    for s in range(samples):
        rng = sample_rng(seed, tag, s)
        t = complex(rng.uniform(0.5, 3.0) * np.exp(1j * rng.uniform(-np.pi, np.pi)))
        vals = []
        try:
            for _, bc, r in br_sides(frame, t, control):
                vals.append(residual(bc, r))
        except SingularPointError as exc:
            rep.failures.append({"point": {"t": [t.real, t.imag]}, "error": str(exc)})
            continue
        if not vals:
            continue
        rep.add(max(vals), {"t": [t.real, t.imag]})
    rep.wall_time = time.perf_counter() - t0
    return rep
