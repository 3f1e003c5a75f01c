import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kzlab.duality import (
    PAIRS,
    br_sides,
    build_frame,
    check_br,
    check_duality_pair,
    normalization_scalar,
)
from kzlab.operators import SingularPointError, c_scalar


def test_unit_frame_has_identity_phi():
    fr = build_frame(2, 2, [1, 1], [1, 1])
    assert fr.dim == 2
    np.testing.assert_array_equal(fr.phi, np.eye(2))


def test_single_point_frame_is_one_dimensional():
    fr = build_frame(2, 1, [3], [2, 1])
    assert fr.space_k.dim == fr.space_n.dim == 1


def test_continued_frame_basis():
    l1 = 0.3 + 0.4j
    fr = build_frame(2, 2, [l1, 1], [l1, 1])
    assert fr.dim == 2 and fr.continued


def test_normalization_scalar_examples():
    fr = build_frame(2, 2, [1, 1], [1, 1])
    lam = (0.9 + 0.2j, -0.4 + 0.1j)
    l12 = lam[0] - lam[1]
    assert normalization_scalar(fr, "k", 0, lam, 1.3) == pytest.approx((l12 + 1) / (l12 - 1))
    assert normalization_scalar(fr, "k", 0, lam, 1.3) == pytest.approx(1 / c_scalar(0, 1, l12, fr.m))
    assert normalization_scalar(build_frame(1, 1, [2], [2]), "k", 0, (0.3,), 1.0) == 1


def test_trivial_frame_pairs_agree_exactly():
    fr = build_frame(1, 1, [2], [2])
    for pair in ("nD", "hD"):
        rep = check_duality_pair(fr, pair, samples=5)
        assert rep.passed and rep.max_residual < 1e-14


@pytest.mark.parametrize("pair", PAIRS)
def test_duality_pairs_unit_frame(pair):
    rep = check_duality_pair(build_frame(2, 2, [1, 1], [1, 1]), pair, samples=20, seed=3)
    assert rep.passed, rep.summary()
    assert rep.max_residual <= 1e-10


@pytest.mark.parametrize("pair", PAIRS)
def test_duality_negative_controls_fail(pair):
    rep = check_duality_pair(build_frame(2, 2, [1, 1], [1, 1]), pair, samples=10, seed=3, control=True)
    assert rep.passed  # a control passes when every residual is at least 1e-2
    assert min(rep.residuals) >= 1e-2


def test_continued_frame_difference_duality():
    rep = check_duality_pair(build_frame(2, 2, [0.3 + 0.4j, 1], [0.3 + 0.4j, 1]), "ZQ", samples=20, seed=1)
    assert rep.max_residual <= 1e-9


def test_br_unit_frame_matches_closed_form():
    fr = build_frame(2, 2, [1, 1], [1, 1])
    t = 0.6 - 0.8j
    flip = np.array([[0, 1], [1, 0]])
    sides = {label: (bc, r) for label, bc, r in br_sides(fr, t)}
    for label in ("k01", "n01"):
        np.testing.assert_allclose(sides[label][1], (t * np.eye(2) + flip) / (t + 1))
    for bc, r in sides.values():
        np.testing.assert_allclose(bc, r, atol=1e-12)


def test_br_reports():
    assert check_br(build_frame(2, 2, [1, 1], [1, 1]), samples=10).passed
    assert min(check_br(build_frame(2, 2, [1, 1], [1, 1]), samples=10, control=True).residuals) >= 1e-2


def test_br_trivial_block():
    fr = build_frame(2, 2, [1, 1], [2, 0])
    for _, bc, r in br_sides(fr, 0.7 + 0.1j):
        np.testing.assert_allclose(bc, r, atol=1e-12)


def test_br_poles_match():
    fr = build_frame(2, 2, [1, 1], [1, 1])
    # t = -1 is a pole of R = (t + P)/(t + 1); the B.C side must fail at the same point
    with pytest.raises((SingularPointError, ZeroDivisionError, FloatingPointError, ValueError)):
        list(br_sides(fr, -1.0 + 0j))


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([(2, 2, [1, 1], [1, 1]), (2, 3, [1, 2, 1], [2, 2]), (3, 2, [2, 2], [2, 1, 1])]),
       st.integers(0, 10 ** 6))
def test_duality_holds_for_any_seed(frame, seed):
    fr = build_frame(*frame)
    assert check_duality_pair(fr, "nD", samples=2, seed=seed).max_residual <= 1e-9
