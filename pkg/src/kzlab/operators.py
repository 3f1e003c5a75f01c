"""Operator families on tensor weight spaces.

Differential operators are stored through their coefficient matrices:
kappa * c_u * d/du - A(point), with c_u = 1 (rational) or c_u = u (trigonometric).
Difference operators are stored through their shift factors: X(point) T_u.

Every coefficient is a finite sum of scalar functions times constant matrices,
which gives exact partial derivatives.  Variables are addressed as ("z", i)
or ("lam", a), 0-based.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .glk_rep import (
    TensorWeightSpace,
    casimir_matrix,
    enumerate_basis,
    generator_matrix,
    is_nonneg_int,
    weight_preserving,
    word_matrix,
)
from .special import loggamma

Var = tuple[str, int]


class SingularPointError(ValueError):
    """Raised when a parameter point hits a pole of an operator."""


@dataclass(frozen=True)
class Point:
    """Parameter point (z, lam, kappa)."""

    z: tuple[complex, ...]
    lam: tuple[complex, ...]
    kappa: complex

    @classmethod
    def of(cls, z, lam, kappa) -> "Point":
        return cls(tuple(complex(x) for x in z), tuple(complex(x) for x in lam), complex(kappa))

    def get(self, var: Var) -> complex:
        name, idx = var
        return self.z[idx] if name == "z" else self.lam[idx]

    def shift(self, var: Var, amount) -> "Point":
        name, idx = var
        vals = list(self.z if name == "z" else self.lam)
        vals[idx] += amount
        if name == "z":
            return replace(self, z=tuple(vals))
        return replace(self, lam=tuple(vals))

    def dual(self) -> "Point":
        """The same point seen from the dual side: positions and dynamical variables swap."""
        return Point(self.lam, self.z, self.kappa)

    def to_json(self) -> dict:
        pair = lambda xs: [[float(x.real), float(x.imag)] for x in xs]
        return {"z": pair(self.z), "lambda": pair(self.lam),
                "kappa": [float(self.kappa.real), float(self.kappa.imag)]}


@dataclass(frozen=True)
class Term:
    value: Callable[[Point], complex]
    grad: Callable[[Point], dict]
    matrix: np.ndarray


def _const(c):
    return Term(lambda p: c, lambda p: {}, None)


@dataclass(frozen=True)
class ParametricOperator:
    """Map from a parameter point to a dense matrix on ``space``.

    kind "diff-coeff": the operator is kappa c_u d/du - eval(point), u = ``variable``.
    kind "shift-factor": the operator is eval(point) T_u, (T_u f)(u) = f(u + kappa).
    """

    space: TensorWeightSpace
    kind: str
    variable: Var
    flavor: str
    evaluator: Callable[[Point], np.ndarray]
    analytic: Callable[[Point, Var], np.ndarray] | None = None

    def __call__(self, point: Point) -> np.ndarray:
        return self.evaluator(point)

    def partial(self, point: Point, var: Var, method: str = "analytic") -> np.ndarray:
        if method == "analytic" and self.analytic is not None:
            return self.analytic(point, var)
        return fd_partial(self.evaluator, point, var)

    def c_factor(self, point: Point) -> complex:
        return 1.0 if self.flavor == "rational" else point.get(self.variable)


def fd_partial(f: Callable[[Point], np.ndarray], point: Point, var: Var, h: float | None = None):
    """Central difference with one Richardson step."""
    x = point.get(var)
    if h is None:
        h = 1e-3 * max(1.0, abs(x))

    def central(step):
        return (f(point.shift(var, step)) - f(point.shift(var, -step))) / (2 * step)

    return (4 * central(h / 2) - central(h)) / 3


def _terms_operator(space, kind, variable, flavor, terms: list[Term]) -> ParametricOperator:
    dim = space.dim
    mats = [t.matrix for t in terms]

    def evaluate(p: Point):
        out = np.zeros((dim, dim), dtype=complex)
        for t, mat in zip(terms, mats):
            out += t.value(p) * mat
        return out

    def analytic(p: Point, var: Var):
        out = np.zeros((dim, dim), dtype=complex)
        for t, mat in zip(terms, mats):
            g = t.grad(p).get(var)
            if g is not None:
                out += g * mat
        return out

    return ParametricOperator(space, kind, variable, flavor, evaluate, analytic)


def _check_distinct(vals, what):
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            if abs(vals[i] - vals[j]) < 1e-14:
                raise SingularPointError(f"coincident {what}: index {i} and {j}")


# --------------------------------------------------------------------------
# constant building blocks


@lru_cache(maxsize=None)
def cartan(space: TensorWeightSpace, a: int, i: int) -> np.ndarray:
    return np.diag(space.matrices[:, a, i])


@lru_cache(maxsize=None)
def omega(space: TensorWeightSpace, i: int, j: int, variant: str = "full") -> np.ndarray:
    return casimir_matrix(space, i, j, variant)


@lru_cache(maxsize=None)
def dd_quadratic(space: TensorWeightSpace, a: int, b: int) -> np.ndarray:
    """e_ab e_ba - e_aa with total generators."""
    n = space.n
    word = [(a, b, "total"), (b, a, "total")]
    return weight_preserving(space, word) - sum(cartan(space, a, i) for i in range(n))


@lru_cache(maxsize=None)
def ordered_pairs(space: TensorWeightSpace, a: int, b: int) -> np.ndarray:
    """sum_{i<j} e_ab^(i) e_ba^(j)."""
    out = np.zeros((space.dim, space.dim), dtype=complex)
    for i in range(space.n):
        for j in range(i + 1, space.n):
            out += weight_preserving(space, [(a, b, i), (b, a, j)])
    return out


# --------------------------------------------------------------------------
# KZ and dynamical differential operators


def kz_coeff(space: TensorWeightSpace, i: int, flavor: str = "rational",
             omega_variant: str = "full") -> ParametricOperator:
    """Coefficient A_i of the KZ operator kappa c d/dz_i - A_i.

    ``omega_variant`` other than "full" deliberately corrupts the operator
    (used by negative controls).
    """
    k, n = space.k, space.n
    terms: list[Term] = []
    if flavor == "rational":
        for a in range(k):
            terms.append(Term(lambda p, a=a: p.lam[a], lambda p, a=a: {("lam", a): 1.0}, cartan(space, a, i)))
        for j in range(n):
            if j == i:
                continue
            terms.append(Term(
                lambda p, j=j: 1.0 / _diff(p.z, i, j),
                lambda p, j=j: {("z", i): -1.0 / _diff(p.z, i, j) ** 2, ("z", j): 1.0 / _diff(p.z, i, j) ** 2},
                omega(space, i, j, omega_variant)))
    elif flavor == "trig":
        for a in range(k):
            half = space.m[a] / 2
            terms.append(Term(lambda p, a=a, half=half: p.lam[a] - half,
                              lambda p, a=a: {("lam", a): 1.0}, cartan(space, a, i)))
        for j in range(n):
            if j == i:
                continue
            terms.append(Term(
                lambda p, j=j: p.z[j] / _diff(p.z, i, j),
                lambda p, j=j: {("z", i): -p.z[j] / _diff(p.z, i, j) ** 2, ("z", j): p.z[i] / _diff(p.z, i, j) ** 2},
                omega(space, i, j, omega_variant)))
            terms.append(Term(lambda p: 1.0, lambda p: {}, omega(space, i, j, "plus")))
    else:
        raise ValueError(f"unknown flavor {flavor!r}")
    return _terms_operator(space, "diff-coeff", ("z", i), flavor, terms)


def _diff(vals, i, j):
    d = vals[i] - vals[j]
    if abs(d) < 1e-14:
        raise SingularPointError(f"coincident points {i} and {j}")
    return d


def dd_coeff(space: TensorWeightSpace, a: int, flavor: str = "rational",
             corrupt: bool = False) -> ParametricOperator:
    """Coefficient of the dynamical operator kappa c d/dlam_a - B_a.

    ``corrupt`` doubles the quadratic term of the first operator only, which
    breaks the antisymmetry the family relies on (negative controls only).
    """
    k, n = space.k, space.n
    scale = 2.0 if corrupt and a == 0 else 1.0
    quad = lambda b: scale * dd_quadratic(space, a, b)
    terms: list[Term] = []
    for i in range(n):
        terms.append(Term(lambda p, i=i: p.z[i], lambda p, i=i: {("z", i): 1.0}, cartan(space, a, i)))
    if flavor == "rational":
        for b in range(k):
            if b == a:
                continue
            terms.append(Term(
                lambda p, b=b: 1.0 / _diff(p.lam, a, b),
                lambda p, b=b: {("lam", a): -1.0 / _diff(p.lam, a, b) ** 2,
                                ("lam", b): 1.0 / _diff(p.lam, a, b) ** 2},
                quad(b)))
    elif flavor == "trig":
        const = -0.5 * space.m[a] ** 2 * np.eye(space.dim, dtype=complex)
        for b in range(k):
            const = const + ordered_pairs(space, a, b)
        terms.append(Term(lambda p: 1.0, lambda p: {}, const))
        for b in range(k):
            if b == a:
                continue
            terms.append(Term(
                lambda p, b=b: p.lam[b] / _diff(p.lam, a, b),
                lambda p, b=b: {("lam", a): -p.lam[b] / _diff(p.lam, a, b) ** 2,
                                ("lam", b): p.lam[a] / _diff(p.lam, a, b) ** 2},
                quad(b)))
    else:
        raise ValueError(f"unknown flavor {flavor!r}")
    return _terms_operator(space, "diff-coeff", ("lam", a), flavor, terms)


def r_trig(space: TensorWeightSpace, i: int, j: int, z: complex) -> np.ndarray:
    """Trigonometric r-matrix r^(ij)(z) = Omega/(z-1) + Omega_+."""
    return omega(space, i, j) / (z - 1) + omega(space, i, j, "plus")


# --------------------------------------------------------------------------
# B-series and C-scalars


@lru_cache(maxsize=None)
def _b_terms(space: TensorWeightSpace, a: int, b: int, cap: int = 200):
    """Matrices e_ba^s e_ab^s (s = 1, 2, ...) on ``space`` until the chain vanishes."""
    out = []
    for s in range(1, cap + 1):
        up = [(a, b, "total")] * s
        mid, _ = word_matrix(space, up)
        if mid is None or not np.any(mid):
            break
        out.append(weight_preserving(space, [(b, a, "total")] * s + up))
    else:
        raise ValueError(f"B_{a}{b} does not truncate on this space (complex weight in slot {b})")
    return tuple(out)


def b_series(space: TensorWeightSpace, a: int, b: int, t: complex) -> np.ndarray:
    """B_ab(t) = 1 + sum_s e_ba^s e_ab^s prod_j 1/(j (t - e_aa + e_bb - j)) on a weight space."""
    if a == b:
        raise ValueError("B_ab needs a != b")
    terms = _b_terms(space, a, b)
    shift = complex(t) - space.m[a] + space.m[b]
    out = np.eye(space.dim, dtype=complex)
    coef = 1.0 + 0j
    for s, mat in enumerate(terms, start=1):
        denom = shift - s
        if abs(denom) < 1e-14:
            raise SingularPointError(f"B_{a}{b}(t) pole at j={s}, weight {space.m}")
        coef = coef / (s * denom)
        out = out + coef * mat
    return out


def b_series_module(k: int, l: int, a: int, b: int, t: complex) -> tuple[np.ndarray, list]:
    """B_ab(t) on a finite module V_l, block diagonal over its weights.

    Returns (matrix, basis) where basis lists (weight, exponent vector) pairs.
    """
    from .glk_rep import HwModule

    mod = HwModule(k, l)
    blocks = []
    basis = []
    for w in mod.weights():
        sp = enumerate_basis(k, 1, (l,), w)
        if sp.dim == 0:
            continue
        blocks.append(b_series(sp, a, b, t))
        basis.extend((w, key) for key in sp.lower)
    dim = sum(bl.shape[0] for bl in blocks)
    out = np.zeros((dim, dim), dtype=complex)
    pos = 0
    for bl in blocks:
        d = bl.shape[0]
        out[pos:pos + d, pos:pos + d] = bl
        pos += d
    return out, basis


def c_scalar(a: int, b: int, t: complex, weights: Sequence) -> complex:
    """Scalar of C_ab(t) on a weight space: prod_{s=1}^{w_b} (t - w_a + s - 1)/(t + s)."""
    wb = weights[b]
    if not is_nonneg_int(wb):
        raise ValueError("product form needs a nonnegative integer weight in slot b")
    t = complex(t)
    out = 1.0 + 0j
    for s in range(1, int(round(complex(wb).real)) + 1):
        if abs(t + s) < 1e-14:
            raise SingularPointError(f"C_{a}{b}(t) pole at t={-s}")
        out *= (t - weights[a] + s - 1) / (t + s)
    return out


def c_scalar_gamma(a: int, b: int, t: complex, weights: Sequence) -> complex:
    """Gamma-ratio form Gamma(t+1) Gamma(t-w_a+w_b) / (Gamma(t-w_a) Gamma(t+w_b+1))."""
    t = complex(t)
    wa, wb = complex(weights[a]), complex(weights[b])
    lg = loggamma(t + 1) + loggamma(t - wa + wb) - loggamma(t - wa) - loggamma(t + wb + 1)
    return complex(np.exp(lg))


# --------------------------------------------------------------------------
# qDD factors


def _diag_power(space: TensorWeightSpace, bases: Sequence[complex], axis: str, idx: int) -> np.ndarray:
    """Diagonal of prod_j base_j^(-exponent_j) on the monomial basis, principal branch.

    axis "col": factor idx is fixed, exponents run over rows a (lam-type powers).
    axis "row": row idx is fixed, exponents run over factors i (z-type powers).
    """
    mats = space.matrices
    logs = np.array([np.log(complex(x)) for x in bases])
    if axis == "row":
        expo = mats[:, idx, :]
    else:
        expo = mats[:, :, idx]
    return np.exp(-(expo * logs[None, :]).sum(axis=1))


def qdd_factor(space: TensorWeightSpace, a: int) -> ParametricOperator:
    """X_a(z; lam), the shift factor of the qDD operator Q_a = X_a T_{lam_a}."""
    k, n = space.k, space.n

    def parts(p: Point):
        if any(abs(x) < 1e-300 for x in p.z):
            raise SingularPointError("z_i = 0")
        left = np.eye(space.dim, dtype=complex)
        for b in range(k - 1, a, -1):
            left = left @ b_series(space, a, b, p.lam[a] - p.lam[b])
        right = np.eye(space.dim, dtype=complex)
        for b in range(a):
            right = right @ b_series(space, b, a, p.lam[b] - p.lam[a] - p.kappa)
        diag = _diag_power(space, p.z, "row", a)
        return np.linalg.inv(left), diag, right

    def evaluate(p: Point):
        linv, diag, right = parts(p)
        return linv @ (diag[:, None] * right)

    def analytic(p: Point, var: Var):
        name, i = var
        if name != "z":
            return fd_partial(evaluate, p, var)
        linv, diag, right = parts(p)
        d = -space.matrices[:, a, i] * diag / p.z[i]
        return linv @ (d[:, None] * right)

    return ParametricOperator(space, "shift-factor", ("lam", a), "rational", evaluate, analytic)


# --------------------------------------------------------------------------
# Yangian R-matrices


def _low(m) -> tuple[int, ...]:
    return tuple(int(round(complex(x).real)) for x in m[1:])


class RMatrixSolver:
    """Solves the invariance, commutation and normalization conditions for R_{V_l V_m}(t).

    Blocks are indexed by the joint weight (mu_2, ..., mu_k); only blocks with
    mu_2 + ... + mu_k <= depth are kept, and only equations whose source and
    target blocks both lie in that range are imposed.
    """

    def __init__(self, k: int, l, m, depth: int):
        self.k = k
        self.l = complex(l)
        self.m = complex(m)
        self.depth = depth
        self.blocks: dict[tuple[int, ...], TensorWeightSpace] = {}
        for s in range(depth + 1):
            for mu in _compositions_list(s, k - 1):
                w = (self.l + self.m - s,) + tuple(complex(x) for x in mu)
                sp = enumerate_basis(k, 2, (self.l, self.m), w)
                if sp.dim:
                    self.blocks[tuple(mu)] = sp
        self.offsets = {}
        pos = 0
        for key, sp in self.blocks.items():
            self.offsets[key] = pos
            pos += sp.dim * sp.dim
        self.size = pos
        self.hw_key = tuple([0] * (k - 1))
        self.A0, self.A1 = self._assemble()

    def _rows(self, src_key, tgt_key, left_mat, right_mat):
        """Rows of vec(R_tgt @ left_mat - right_mat @ R_src) = 0."""
        src, tgt = self.blocks[src_key], self.blocks[tgt_key]
        dt, ds = tgt.dim, src.dim
        rows = np.zeros((dt * ds, self.size), dtype=complex)
        o_t, o_s = self.offsets[tgt_key], self.offsets[src_key]
        rows[:, o_t:o_t + dt * dt] += np.kron(np.eye(dt), left_mat.T)
        rows[:, o_s:o_s + ds * ds] -= np.kron(right_mat, np.eye(ds))
        return rows

    def _assemble(self):
        k = self.k
        eq0, eq1 = [], []
        for key, sp in self.blocks.items():
            for a in range(k):
                for b in range(k):
                    w = list(sp.m)
                    w[a] += 1
                    w[b] -= 1
                    tkey = _low(w)
                    if tkey not in self.blocks:
                        continue
                    if a != b:
                        delta, tgt = generator_matrix(sp, a, b, "total")
                        if tgt is None:
                            continue
                        delta = _align(delta, tgt, self.blocks[tkey])
                        rows = self._rows(key, tkey, delta, delta)
                        eq0.append(rows)
                        eq1.append(np.zeros_like(rows))
                    e1, tgt = generator_matrix(sp, a, b, 0)
                    if tgt is None:
                        continue
                    e1 = _align(e1, tgt, self.blocks[tkey])
                    left = np.zeros_like(e1)
                    right = np.zeros_like(e1)
                    for c in range(k):
                        left += _word_to(sp, [(a, c, 0), (c, b, 1)], self.blocks[tkey])
                        right += _word_to(sp, [(c, b, 0), (a, c, 1)], self.blocks[tkey])
                    # R (t e1 + left) - (t e1 + right) R = 0
                    eq0.append(self._rows(key, tkey, left, right))
                    eq1.append(self._rows(key, tkey, e1, e1))
        return np.vstack(eq0), np.vstack(eq1)

    def solve(self, t: complex) -> dict[tuple[int, ...], np.ndarray]:
        A = self.A0 + complex(t) * self.A1
        h = self.offsets[self.hw_key]
        others = [c for c in range(self.size) if c != h]
        rhs = -A[:, h]
        sub = A[:, others]
        x, _, rank, sv = np.linalg.lstsq(sub, rhs, rcond=None)
        if len(sv) and (rank < len(others) or sv[-1] < 1e-12 * sv[0]):
            raise SingularPointError(f"R-matrix system singular at t={t} (rank {rank} < {len(others)})")
        full = np.insert(x, h, 1.0)
        res = np.linalg.norm(A @ full) / (1 + np.linalg.norm(A) * np.linalg.norm(full))
        if res > 1e-10:
            raise SingularPointError(f"R-matrix system inconsistent at t={t}: residual {res:.2e}")
        out = {}
        for key, sp in self.blocks.items():
            o = self.offsets[key]
            out[key] = full[o:o + sp.dim * sp.dim].reshape(sp.dim, sp.dim)
        return out


def _compositions_list(total, parts):
    if parts == 0:
        return [()] if total == 0 else []
    from .glk_rep import _compositions

    return list(_compositions(total, parts))


def _align(mat, have: TensorWeightSpace, want: TensorWeightSpace) -> np.ndarray:
    if have.lower == want.lower:
        return mat
    perm = [have.index[key] for key in want.lower]
    return mat[perm, :]


def _word_to(space, word, want):
    mat, tgt = word_matrix(space, word)
    if mat is None:
        return np.zeros((want.dim, space.dim), dtype=complex)
    return _align(mat, tgt, want)


@lru_cache(maxsize=None)
def r_solver(k: int, l: complex, m: complex, depth: int) -> RMatrixSolver:
    return RMatrixSolver(k, l, m, depth)


@dataclass
class RMatrixTable:
    """R_{V_l V_m}(t) at one value of t, stored block by block."""

    k: int
    l: complex
    m: complex
    t: complex
    blocks: dict
    spaces: dict

    def block(self, mu_low) -> np.ndarray:
        return self.blocks[tuple(mu_low)]


def _default_depth(k, l, m, depth):
    if depth is not None:
        return depth
    if is_nonneg_int(l) and is_nonneg_int(m):
        return int(round(complex(l).real + complex(m).real))
    raise ValueError("infinite-dimensional factor: give a truncation depth")


def yangian_r(l, m, k: int, t: complex, depth: int | None = None) -> RMatrixTable:
    """R_{V_l V_m}(t) for gl_k, block by block over joint weights."""
    d = _default_depth(k, l, m, depth)
    solver = r_solver(k, complex(l), complex(m), d)
    return RMatrixTable(k, complex(l), complex(m), complex(t), solver.solve(t), solver.blocks)


def r_matrix_on(space: TensorWeightSpace, i: int, j: int, t: complex) -> np.ndarray:
    """R^(ij)(t) = (R_{V_{l_i} V_{l_j}}(t))^(ij) acting on an n-fold weight space."""
    k = space.k
    if not is_nonneg_int(space.l[j]):
        raise ValueError("R^(ij) needs an integer highest weight in the second slot")
    depth = int(round(sum(complex(x).real for x in space.m[1:])))
    if is_nonneg_int(space.l[i]) and is_nonneg_int(space.l[j]):
        depth = min(depth, int(round(complex(space.l[i]).real + complex(space.l[j]).real)))
    solver = r_solver(k, complex(space.l[i]), complex(space.l[j]), depth)
    blocks = solver.solve(t)
    return _lift_pair(space, i, j, solver.blocks, blocks)


def _lift_pair(space, i, j, spaces, blocks) -> np.ndarray:
    mats = space.matrices
    k, n = space.k, space.n
    groups: dict = {}
    for q in range(space.dim):
        low = np.rint(mats[q, 1:, :].real).astype(int)
        pair = tuple(np.stack([low[:, i], low[:, j]], axis=1).ravel())
        rest = tuple(low[:, [c for c in range(n) if c not in (i, j)]].ravel())
        mu = tuple(low[:, i] + low[:, j])
        groups.setdefault((rest, mu), {})[pair] = q
    out = np.zeros((space.dim, space.dim), dtype=complex)
    for (rest, mu), members in groups.items():
        sp = spaces[mu]
        blk = blocks[mu]
        idx = [(sp.index[pair], q) for pair, q in members.items()]
        for pa, qa in idx:
            for pb, qb in idx:
                out[qa, qb] = blk[pa, pb]
    return out


def flip_matrix(src: TensorWeightSpace, dst: TensorWeightSpace) -> np.ndarray:
    """Flip P: V x W -> W x V between two-factor weight spaces (columns swapped)."""
    out = np.zeros((dst.dim, src.dim), dtype=complex)
    for q, key in enumerate(src.lower):
        low = np.array(key).reshape(src.k - 1, 2)
        out[dst.index[tuple(low[:, ::-1].ravel())], q] = 1.0
    return out


# --------------------------------------------------------------------------
# qKZ factors


def qkz_factor(space: TensorWeightSpace, i: int) -> ParametricOperator:
    """K_i(z; lam), the shift factor of the qKZ operator Z_i = K_i T_{z_i}."""
    n = space.n

    def parts(p: Point):
        if any(abs(x) < 1e-300 for x in p.lam):
            raise SingularPointError("lam_a = 0")
        left = np.eye(space.dim, dtype=complex)
        for j in range(n - 1, i, -1):
            left = left @ r_matrix_on(space, i, j, p.z[i] - p.z[j])
        right = np.eye(space.dim, dtype=complex)
        for j in range(i):
            right = right @ r_matrix_on(space, j, i, p.z[j] - p.z[i] - p.kappa)
        diag = _diag_power(space, p.lam, "col", i)
        return np.linalg.inv(left), diag, right

    def evaluate(p: Point):
        linv, diag, right = parts(p)
        return linv @ (diag[:, None] * right)

    def analytic(p: Point, var: Var):
        name, a = var
        if name != "lam":
            return fd_partial(evaluate, p, var)
        linv, diag, right = parts(p)
        d = -space.matrices[:, a, i] * diag / p.lam[a]
        return linv @ (d[:, None] * right)

    return ParametricOperator(space, "shift-factor", ("z", i), "rational", evaluate, analytic)
