"""Monomial realizations of gl_k modules and their tensor-product weight spaces.

A basis vector of (V_{l_1} x ... x V_{l_n})[m] is a k-by-n matrix d with column
sums l_i and row sums m_a.  Only the corner entry d[0, 0] may be non-integral
(when l_1, m_1 are complex); it is determined by the rest of the matrix, so a
basis vector is stored through its lower block d[1:, :].

Vectors are written in the divided-power basis x^(d) = prod x_ai^d_ai / d_ai!,
so e_ab^(i) = x_ai d/dx_bi sends x^(d) to (d_ai + 1) x^(d + E_ai - E_bi).

Indices of generators, factors and weights are 0-based in this module.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

INT_TOL = 1e-12


def is_nonneg_int(x) -> bool:
    x = complex(x)
    r = round(x.real)
    return abs(x - r) < INT_TOL and r >= 0


def _as_int(x, what: str) -> int:
    if not is_nonneg_int(x):
        raise ValueError(f"{what} must be a nonnegative integer, got {x!r}")
    return int(round(complex(x).real))


def _ctuple(xs) -> tuple[complex, ...]:
    return tuple(complex(x) for x in xs)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class TensorWeightSpace:
    """Weight subspace (V_{l_1} x ... x V_{l_n})[m] of a gl_k tensor product.

    ``lower`` lists the basis vectors (rows 1..k-1 of d, flattened row-major)
    in the order used for every matrix built on this space.
    """

    k: int
    n: int
    l: tuple[complex, ...]
    m: tuple[complex, ...]
    lower: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.lower)

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {key: i for i, key in enumerate(self.lower)}

    @cached_property
    def matrices(self) -> np.ndarray:
        """Array of shape (dim, k, n) holding the full matrices d (complex)."""
        out = np.zeros((self.dim, self.k, self.n), dtype=complex)
        for q, key in enumerate(self.lower):
            low = np.array(key, dtype=float).reshape(self.k - 1, self.n)
            out[q, 1:, :] = low
            out[q, 0, :] = np.array(self.l) - low.sum(axis=0)
        return out

    def column_weights(self, i: int) -> np.ndarray:
        """Exponent of x_a in factor i for every basis vector: shape (dim, k)."""
        return self.matrices[:, :, i]

    def shifted_weight(self, a: int, b: int) -> tuple[complex, ...] | None:
        """Weight m + alpha_ab, or None if it leaves the admissible region."""
        m = list(self.m)
        m[a] += 1
        m[b] -= 1
        if b > 0 and (m[b].real < -0.5):
            return None
        return tuple(m)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "l": [[float(x.real), float(x.imag)] for x in self.l],
            "m": [[float(x.real), float(x.imag)] for x in self.m],
            "basis": [_json_matrix(d) for d in self.matrices],
        }


def _json_matrix(d: np.ndarray):
    rows = []
    for row in d:
        out = []
        for x in row:
            if abs(x.imag) == 0 and float(x.real).is_integer():
                out.append(int(x.real))
            else:
                out.append([float(x.real), float(x.imag)])
        rows.append(out)
    return rows


def _free_key(k: int, n: int, l: Sequence[complex], low: tuple[int, ...]):
    block = np.array(low, dtype=float).reshape(k - 1, n)
    top = [int(round((complex(l[i]) - block[:, i].sum()).real)) for i in range(1, n)]
    return tuple(top) + tuple(low)


def _lower_blocks(k: int, n: int, l, m):
    l_int = [is_nonneg_int(x) for x in l]
    caps = [int(round(complex(x).real)) if ok else None for x, ok in zip(l, l_int)]
    rows = [list(_compositions(_as_int(m[a], f"m[{a}]"), n)) for a in range(1, k)]
    for choice in itertools.product(*rows):
        ok = True
        for i in range(n):
            col = sum(r[i] for r in choice)
            if caps[i] is not None and col > caps[i]:
                ok = False
                break
        if ok:
            yield tuple(x for r in choice for x in r)


def enumerate_basis(k: int, n: int, l: Sequence, m: Sequence) -> TensorWeightSpace:
    """Basis of (V_{l_1} x ... x V_{l_n})[m] in lexicographic order of free entries."""
    l = _ctuple(l)
    m = _ctuple(m)
    if len(l) != n or len(m) != k:
        raise ValueError("l must have n entries and m must have k entries")
    for i in range(1, n):
        _as_int(l[i], f"l[{i}]")
    for a in range(1, k):
        _as_int(m[a], f"m[{a}]")
    if abs(sum(l) - sum(m)) > 1e-9 * (1 + max(abs(x) for x in l + m)):
        raise ValueError(f"weight mismatch: sum(l)={sum(l)} differs from sum(m)={sum(m)}")
    if k == 1:
        blocks = [()]
    else:
        blocks = list(_lower_blocks(k, n, l, m))
    blocks.sort(key=lambda low: _free_key(k, n, l, low))
    return TensorWeightSpace(k, n, l, m, tuple(blocks))


def space_from_matrices(k: int, n: int, l, m, mats: Sequence[np.ndarray]) -> TensorWeightSpace:
    """Weight space whose basis is the given list of matrices, in the given order."""
    lower = tuple(tuple(int(round(x.real)) for x in np.asarray(d)[1:, :].ravel()) for d in mats)
    return TensorWeightSpace(k, n, _ctuple(l), _ctuple(m), lower)


def transpose_space(space: TensorWeightSpace) -> TensorWeightSpace:
    """The gl_n weight space built on transposed matrices, same order of basis vectors."""
    mats = [d.T for d in space.matrices]
    return space_from_matrices(space.n, space.k, space.m, space.l, mats)


@dataclass(frozen=True)
class HwModule:
    """Highest-weight module V_l of gl_k, realized on monomials x_1^(l-|d|) x_2^d_2 ... x_k^d_k."""

    k: int
    l: complex

    @property
    def finite(self) -> bool:
        return is_nonneg_int(self.l)

    def weights(self, depth: int | None = None) -> list[tuple[complex, ...]]:
        """Weights (l - s, d_2, ..., d_k) with s = d_2+...+d_k <= depth (or <= l)."""
        if depth is None:
            if not self.finite:
                raise ValueError("infinite module: a depth must be given")
            depth = int(round(complex(self.l).real))
        out = []
        for s in range(depth + 1):
            for rest in _compositions(s, self.k - 1) if self.k > 1 else [()]:
                if self.k == 1 and s > 0:
                    continue
                out.append((complex(self.l) - s,) + tuple(complex(x) for x in rest))
        return out

    def weight_block(self, m) -> TensorWeightSpace:
        return enumerate_basis(self.k, 1, (self.l,), m)

    def dim(self) -> int:
        return len(self.weights())


# --------------------------------------------------------------------------
# Generator matrices


@lru_cache(maxsize=None)
def _target(space: TensorWeightSpace, a: int, b: int) -> TensorWeightSpace | None:
    if a == b:
        return space
    m = space.shifted_weight(a, b)
    if m is None:
        return None
    return enumerate_basis(space.k, space.n, space.l, m)


@lru_cache(maxsize=None)
def _generator(space: TensorWeightSpace, a: int, b: int, i: int):
    tgt = _target(space, a, b)
    if tgt is None:
        return np.zeros((0, space.dim), dtype=complex), None
    mat = np.zeros((tgt.dim, space.dim), dtype=complex)
    mats = space.matrices
    for q in range(space.dim):
        d = mats[q].copy()
        if a == b:
            mat[q, q] = d[a, i]
            continue
        d[a, i] += 1
        d[b, i] -= 1
        key = tuple(int(round(x.real)) for x in d[1:, :].ravel())
        p = tgt.index.get(key)
        if p is not None:
            mat[p, q] = d[a, i]
    mat.setflags(write=False)
    return mat, tgt


def generator_matrix(space: TensorWeightSpace, a: int, b: int, i: int | str = "total"):
    """Matrix of e_ab^(i) (or the coproduct sum for i="total") and its target space.

    Returns (matrix, target) where matrix has shape (target.dim, space.dim);
    target is None (and the matrix has zero rows) when m + alpha_ab is not a weight.
    """
    if not (0 <= a < space.k and 0 <= b < space.k):
        raise IndexError("generator index out of range")
    if i == "total":
        mats = [_generator(space, a, b, j) for j in range(space.n)]
        tgt = mats[0][1]
        total = sum(m for m, _ in mats)
        return np.asarray(total), tgt
    if not 0 <= i < space.n:
        raise IndexError("factor index out of range")
    return _generator(space, a, b, i)


def word_matrix(space: TensorWeightSpace, word: Sequence[tuple[int, int, int | str]]):
    """Product e_{a1 b1}^{(i1)} ... e_{ar br}^{(ir)} applied right-to-left.

    Returns (matrix, target space); the matrix is zero if the chain leaves the weights.
    """
    current = space
    acc = np.eye(space.dim, dtype=complex)
    for a, b, i in reversed(list(word)):
        if current is None:
            break
        mat, nxt = generator_matrix(current, a, b, i)
        acc = mat @ acc
        current = nxt
    if current is None:
        return None, None
    return acc, current


def weight_preserving(space: TensorWeightSpace, word) -> np.ndarray:
    """Matrix of a zero-weight word on ``space`` (zero if the chain drops out)."""
    mat, tgt = word_matrix(space, word)
    if mat is None:
        return np.zeros((space.dim, space.dim), dtype=complex)
    if tgt.lower != space.lower:
        # same weight, possibly a different ordering of the same basis
        perm = [tgt.index[key] for key in space.lower]
        mat = mat[perm, :]
    return mat


def casimir_matrix(space: TensorWeightSpace, i: int, j: int, variant: str = "full") -> np.ndarray:
    """Omega^(ij) = sum e_ab^(i) e_ba^(j), or one of its triangular halves."""
    if i == j:
        raise ValueError("casimir needs two distinct factors")
    if variant not in ("full", "plus", "minus"):
        raise ValueError(f"unknown casimir variant {variant!r}")
    k = space.k
    out = np.zeros((space.dim, space.dim), dtype=complex)
    if variant == "full":
        for a in range(k):
            for b in range(k):
                out += weight_preserving(space, [(a, b, i), (b, a, j)])
        return out
    for a in range(k):
        out += 0.5 * weight_preserving(space, [(a, a, i), (a, a, j)])
    for a in range(k):
        for b in range(a + 1, k):
            word = [(a, b, i), (b, a, j)] if variant == "plus" else [(b, a, i), (a, b, j)]
            out += weight_preserving(space, word)
    return out


def cartan_diagonal(space: TensorWeightSpace, a: int, i: int) -> np.ndarray:
    """Eigenvalues of e_aa^(i) on the basis (the exponent d_ai)."""
    return space.matrices[:, a, i].copy()


# --------------------------------------------------------------------------
# Exact arithmetic for integer weights


def generator_matrix_exact(space: TensorWeightSpace, a: int, b: int, i: int):
    """Generator matrix with Fraction entries (integer weights only)."""
    if not all(is_nonneg_int(x) for x in space.l):
        raise ValueError("exact path needs integer weights")
    mat, tgt = generator_matrix(space, a, b, i)
    rows = [[Fraction(int(round(x.real))) for x in row] for row in mat]
    return rows, tgt


def exact_matmul(x, y):
    if not x or not y:
        cols = len(y[0]) if y else 0
        return [[Fraction(0)] * cols for _ in range(len(x))]
    return [[sum((x[r][s] * y[s][c] for s in range(len(y))), Fraction(0)) for c in range(len(y[0]))]
            for r in range(len(x))]
