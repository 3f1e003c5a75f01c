import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from kzlab.glk_rep import (
    cartan_diagonal,
    casimir_matrix,
    enumerate_basis,
    generator_matrix,
    transpose_space,
    weight_preserving,
)

from strategies import small_weight_space


def full_matrices(space):
    return [np.round(d.real).astype(int).tolist() for d in space.matrices]


def test_basis_two_by_two_unit_weights():
    sp = enumerate_basis(2, 2, [1, 1], [1, 1])
    assert sp.dim == 2
    assert sorted(full_matrices(sp)) == sorted([[[1, 0], [0, 1]], [[0, 1], [1, 0]]])


def test_basis_single_factor_is_forced():
    sp = enumerate_basis(2, 1, [3], [3, 0])
    assert sp.dim == 1
    assert full_matrices(sp) == [[[3], [0]]]


def test_basis_with_complex_first_weight():
    l1 = 0.4 + 0.7j
    sp = enumerate_basis(2, 2, [l1, 1], [l1, 1])
    assert sp.dim == 2
    mats = {tuple(np.round(d[1].real).astype(int)): d for d in sp.matrices}
    # the free entry b in {0, 1} is the second-row entry over the first point
    np.testing.assert_allclose(mats[(0, 1)], [[l1, 0], [0, 1]])
    np.testing.assert_allclose(mats[(1, 0)], [[l1 - 1, 1], [1, 0]])


@pytest.mark.parametrize("l", [1, 4, 5])
def test_single_module_generators_in_divided_powers(l):
    # v_s = e21^s v / s!: e21 v_s = (s+1) v_{s+1}, e12 v_s = (l-s+1) v_{s-1}, e11 v_s = (l-s) v_s.
    # From x1 d/dx2 on x1^(l-s) x2^s = s x1^(l-s+1) x2^(s-1), rescaled by the binomial normalisation.
    for s in range(l + 1):
        sp = enumerate_basis(2, 1, [l], [l - s, s])
        up, _ = generator_matrix(sp, 0, 1)
        down, _ = generator_matrix(sp, 1, 0)
        h, _ = generator_matrix(sp, 0, 0)
        assert h[0, 0] == l - s
        if s > 0:
            assert up[0, 0] == l - s + 1
        if s < l:
            assert down[0, 0] == s + 1


def test_euler_operator_is_diagonal():
    sp = enumerate_basis(3, 2, [2, 3], [2, 2, 1])
    for a in range(3):
        for i in range(2):
            mat, _ = generator_matrix(sp, a, a, i)
            np.testing.assert_array_equal(mat, np.diag(cartan_diagonal(sp, a, i)))


def test_casimir_rank_one_case():
    sp = enumerate_basis(1, 2, [2, 3], [5])
    np.testing.assert_allclose(casimir_matrix(sp, 0, 1), [[6.0]])


def test_casimir_on_two_vector_representations_is_the_flip():
    sp = enumerate_basis(2, 2, [1, 1], [1, 1])
    np.testing.assert_allclose(casimir_matrix(sp, 0, 1), [[0, 1], [1, 0]])


def _product_formula_dim(l, m2):
    poly = np.array([1])
    for li in l:
        poly = np.convolve(poly, np.ones(li + 1, dtype=int))
    return int(poly[m2]) if m2 < poly.size else 0


@settings(max_examples=60, deadline=None)
@given(small_weight_space(kmax=2))
def test_dimension_matches_generating_function(km):
    k, n, l, m = km
    if k == 1:
        assert enumerate_basis(k, n, l, m).dim == 1
        return
    assert enumerate_basis(k, n, l, m).dim == _product_formula_dim(l, m[1])


@settings(max_examples=40, deadline=None)
@given(small_weight_space())
def test_commutation_relations(km):
    k, n, l, m = km
    sp = enumerate_basis(k, n, l, m)
    if sp.dim == 0:
        return
    for a, b in itertools.permutations(range(k), 2):
        lhs = (weight_preserving(sp, [(a, b, "total"), (b, a, "total")])
               - weight_preserving(sp, [(b, a, "total"), (a, b, "total")]))
        np.testing.assert_allclose(lhs, (m[a] - m[b]) * np.eye(sp.dim), atol=1e-12)
        for i in range(n):
            lhs = (weight_preserving(sp, [(a, b, i), (b, a, i)])
                   - weight_preserving(sp, [(b, a, i), (a, b, i)]))
            diag = cartan_diagonal(sp, a, i) - cartan_diagonal(sp, b, i)
            np.testing.assert_allclose(lhs, np.diag(diag), atol=1e-12)
            for j in range(n):
                if j != i:
                    lhs = (weight_preserving(sp, [(a, b, i), (b, a, j)])
                           - weight_preserving(sp, [(b, a, j), (a, b, i)]))
                    np.testing.assert_allclose(lhs, 0, atol=1e-12)
    for a, b, c in itertools.permutations(range(k), 3):
        # [e_ab, e_bc] = e_ac, tested after closing the loop with e_ca
        lhs = (weight_preserving(sp, [(a, b, "total"), (b, c, "total"), (c, a, "total")])
               - weight_preserving(sp, [(b, c, "total"), (a, b, "total"), (c, a, "total")]))
        rhs = weight_preserving(sp, [(a, c, "total"), (c, a, "total")])
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(small_weight_space())
def test_total_cartan_acts_by_the_weight(km):
    k, n, l, m = km
    sp = enumerate_basis(k, n, l, m)
    for a in range(k):
        total = sum(cartan_diagonal(sp, a, i) for i in range(n))
        np.testing.assert_allclose(total, m[a] * np.ones(sp.dim))


@settings(max_examples=40, deadline=None)
@given(small_weight_space(nmax=3))
def test_casimir_halves_and_invariance(km):
    k, n, l, m = km
    if n < 2:
        return
    sp = enumerate_basis(k, n, l, m)
    if sp.dim == 0:
        return
    for i, j in itertools.permutations(range(n), 2):
        full = casimir_matrix(sp, i, j)
        np.testing.assert_allclose(full, casimir_matrix(sp, i, j, "plus") + casimir_matrix(sp, i, j, "minus"))
        np.testing.assert_allclose(full, casimir_matrix(sp, j, i))
        for a, b in itertools.permutations(range(k), 2):
            mat, tgt = generator_matrix(sp, a, b)
            if tgt is None or tgt.dim == 0:
                continue
            np.testing.assert_allclose(mat @ full, casimir_matrix(tgt, i, j) @ mat, atol=1e-10)


def test_transpose_space_keeps_basis_order():
    sp = enumerate_basis(3, 2, [2, 2], [2, 1, 1])
    tr = transpose_space(sp)
    assert (tr.k, tr.n) == (2, 3)
    for d, dt in zip(sp.matrices, tr.matrices):
        np.testing.assert_array_equal(d.T, dt)


def test_bad_weights_are_rejected():
    with pytest.raises(ValueError):
        enumerate_basis(2, 2, [1, 1], [1.5, 0.5])
