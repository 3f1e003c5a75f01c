import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kzlab.glk_rep import casimir_matrix, enumerate_basis
from kzlab.operators import (
    Point,
    SingularPointError,
    b_series,
    b_series_module,
    c_scalar,
    c_scalar_gamma,
    dd_coeff,
    fd_partial,
    kz_coeff,
    qdd_factor,
    qkz_factor,
    r_matrix_on,
    r_trig,
    yangian_r,
)

from strategies import complex_numbers

FLIP = np.array([[0, 1], [1, 0]])


def test_kz_single_point_has_no_casimir_term():
    sp = enumerate_basis(2, 1, [2], [1, 1])
    mat = kz_coeff(sp, 0)(Point.of([0.3], [0.5, -1.0], 1.0))
    np.testing.assert_allclose(mat, [[0.5 - 1.0]])


def test_kz_rank_one_two_points():
    sp = enumerate_basis(1, 2, [2, 3], [5])
    z, lam = [0.4, -0.3j], [0.7]
    mat = kz_coeff(sp, 0)(Point.of(z, lam, 1.1))
    np.testing.assert_allclose(mat, [[0.7 * 2 + 6 / (z[0] - z[1])]])


def test_trig_r_tends_to_upper_half_casimir():
    sp = enumerate_basis(2, 2, [1, 1], [1, 1])
    np.testing.assert_allclose(r_trig(sp, 0, 1, 1e9), casimir_matrix(sp, 0, 1, "plus"), atol=1e-8)


def test_dd_single_point_quadratic_term():
    # on V_l, index s: (e12 e21 - e11) has eigenvalue (s+1)(l-s) - (l-s) = s(l-s)
    l, s = 4, 2
    sp = enumerate_basis(2, 1, [l], [l - s, s])
    lam = (0.5 + 0.1j, -0.3)
    mat = dd_coeff(sp, 0)(Point.of([0.0], lam, 1.3))
    np.testing.assert_allclose(mat, [[s * (l - s) / (lam[0] - lam[1])]])


def test_dd_rank_one_is_position_weighted_cartan():
    sp = enumerate_basis(1, 2, [2, 3], [5])
    z = [0.4, -0.3j]
    np.testing.assert_allclose(dd_coeff(sp, 0)(Point.of(z, [0.7], 1.1)), [[2 * z[0] + 3 * z[1]]])


def test_b_series_on_vector_representation():
    t = 0.7 + 0.2j
    mat, _ = b_series_module(2, 1, 0, 1, t)
    np.testing.assert_allclose(mat, np.diag([1, (t + 1) / t]))


def test_b_series_inversion_formula_on_vector_representation():
    # B_ab(t) B_ba(-t) = 1 - (e_aa - e_bb)/t
    t = 0.7 + 0.2j
    b12, _ = b_series_module(2, 1, 0, 1, t)
    b21, _ = b_series_module(2, 1, 1, 0, -t)
    np.testing.assert_allclose(b12 @ b21, np.diag([1 - 1 / t, 1 + 1 / t]))


def test_b_series_fixes_highest_weight_vector():
    mat, _ = b_series_module(2, 3, 0, 1, 0.9 - 0.4j)
    assert mat[0, 0] == pytest.approx(1)
    np.testing.assert_allclose(mat[0, 1:], 0, atol=1e-14)


def test_c_scalar_examples():
    t = 0.7 + 0.2j
    assert c_scalar(0, 1, t, (1, 1)) == pytest.approx((t - 1) / (t + 1))
    assert c_scalar(0, 1, t, (1, 0)) == 1


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 4), st.integers(0, 4), complex_numbers(0.3, 4.0))
def test_c_scalar_gamma_form_equals_product(ma, mb, t):
    if min(abs(t - n) for n in range(-10, 11)) < 1e-2:
        return
    prod = c_scalar(0, 1, t, (ma, mb))
    gam = c_scalar_gamma(0, 1, t, (ma, mb))
    assert abs(prod - gam) <= 1e-12 * max(1.0, abs(prod))


def test_qdd_factor_rank_one():
    sp = enumerate_basis(1, 2, [2, 3], [5])
    z = (0.4 + 0.1j, 0.5 - 0.3j)
    np.testing.assert_allclose(qdd_factor(sp, 0)(Point.of(z, [0.7], 1.1)), [[z[0] ** -2 * z[1] ** -3]])


def test_qkz_factor_single_point():
    sp = enumerate_basis(2, 1, [3], [2, 1])
    lam = (0.7, 0.2 + 0.3j)
    np.testing.assert_allclose(qkz_factor(sp, 0)(Point.of([0.4 + 0.1j], lam, 1.1)),
                               [[lam[0] ** -2 * lam[1] ** -1]])


def test_r_matrix_on_two_vector_representations():
    t = 0.7 + 0.3j
    sp = enumerate_basis(2, 2, [1, 1], [1, 1])
    np.testing.assert_allclose(r_matrix_on(sp, 0, 1, t), (t * np.eye(2) + FLIP) / (t + 1))


def test_r_matrix_k3_vector_block():
    t = -0.3 + 1.1j
    tab = yangian_r(1, 1, 3, t)
    for key, block in tab.blocks.items():
        dim = block.shape[0]
        if dim == 2:
            np.testing.assert_allclose(block, (t * np.eye(2) + FLIP) / (t + 1), atol=1e-12)
        else:
            np.testing.assert_allclose(block, np.eye(dim), atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(1, 1), (1, 2), (2, 1), (2, 2)]), complex_numbers(0.4, 3.0))
def test_r_matrix_inversion(ls, t):
    if min(abs(t - n) for n in range(-6, 7)) < 1e-2:
        return
    l1, l2 = ls
    sp = enumerate_basis(2, 2, [l1, l2], [l1 + l2 - 1, 1])
    flipped = enumerate_basis(2, 2, [l2, l1], [l1 + l2 - 1, 1])
    # R^(12)(t) R^(21)(-t) = 1, with R^(21) computed on the flipped factors
    from kzlab.operators import flip_matrix
    p = flip_matrix(sp, flipped)
    lhs = r_matrix_on(sp, 0, 1, t) @ np.linalg.inv(p) @ r_matrix_on(flipped, 0, 1, -t) @ p
    np.testing.assert_allclose(lhs, np.eye(sp.dim), atol=1e-11)


@settings(max_examples=20, deadline=None)
@given(complex_numbers(0.5, 3.0), complex_numbers(0.5, 3.0))
def test_yang_baxter_on_three_vector_representations(t, u):
    if min(abs(x - n) for x in (t, u, t - u) for n in range(-4, 5)) < 1e-2:
        return
    sp = enumerate_basis(2, 3, [1, 1, 1], [2, 1])
    lhs = r_matrix_on(sp, 0, 1, t - u) @ r_matrix_on(sp, 0, 2, t) @ r_matrix_on(sp, 1, 2, u)
    rhs = r_matrix_on(sp, 1, 2, u) @ r_matrix_on(sp, 0, 2, t) @ r_matrix_on(sp, 0, 1, t - u)
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 3), complex_numbers(0.5, 3.0))
def test_r_matrix_is_rational_of_bounded_degree(m2, t):
    # for V_1 x V_1 the entries times (t+1) are affine in t
    if abs(t + 1) < 1e-2 or abs(t) < 1e-2:
        return
    sp = enumerate_basis(2, 2, [1, 1], [1, 1])
    vals = [(s + 1) * r_matrix_on(sp, 0, 1, s) for s in (t, t + 1, t + 2)]
    np.testing.assert_allclose(vals[2] - 2 * vals[1] + vals[0], 0, atol=1e-10)


def test_analytic_partials_match_finite_differences():
    sp = enumerate_basis(2, 2, [1, 2], [2, 1])
    p = Point.of([0.4 + 0.2j, -0.7 + 0.5j], [1.1 - 0.3j, -0.2 + 0.6j], 0.9 + 0.4j)
    for op in (kz_coeff(sp, 0), kz_coeff(sp, 1, "trig"), dd_coeff(sp, 0), dd_coeff(sp, 1, "trig")):
        for var in (("z", 0), ("z", 1), ("lam", 0), ("lam", 1)):
            np.testing.assert_allclose(op.partial(p, var), fd_partial(op, p, var), atol=1e-7)


def test_singular_point_is_reported():
    sp = enumerate_basis(2, 2, [1, 1], [1, 1])
    with pytest.raises(SingularPointError):
        kz_coeff(sp, 0)(Point.of([0.3, 0.3], [1.0, -1.0], 1.0))


def test_b_series_weight_zero_gives_identity_on_lowest_piece():
    sp = enumerate_basis(2, 2, [1, 1], [2, 0])
    np.testing.assert_allclose(b_series(sp, 0, 1, 0.6 + 0.1j), np.eye(sp.dim))
