import numpy as np
import pytest

from kzlab.hyperint.coefficients import duality_coefficient
from kzlab.hyperint.identities import (
    check_identity,
    hyp2f1_euler,
    hyp2f1_half_line,
    hyp2f1_mellin_barnes,
    hyp2f1_series,
)

HYP_REAL = 0.8690595502969777                         # 2F1(0.7, 1.1; 1.9; -0.4)
HYP_COMPLEX = 0.9021693614687786 + 0.05776382492201834j  # 2F1(0.4, 0.9+0.3i; 1.6; -0.3+0.5i)
AHAT0 = 0.05109463216217491 + 0.16970031106877803j    # l1 = -0.7+0.2i, kappa = 2.3


@pytest.mark.parametrize("route", [hyp2f1_mellin_barnes, hyp2f1_euler, hyp2f1_half_line])
def test_2f1_routes_against_reference(route):
    val, err = route(0.7, 1.1, 1.9, -0.4)
    assert val == pytest.approx(HYP_REAL, rel=1e-12)
    assert err < 1e-10
    val, _ = route(0.4, 0.9 + 0.3j, 1.6, -0.3 + 0.5j)
    assert val == pytest.approx(HYP_COMPLEX, rel=1e-10)


def test_2f1_series_reference():
    assert hyp2f1_series(0.7, 1.1, 1.9, -0.4) == pytest.approx(HYP_REAL, rel=1e-14)


def test_2f1_region_guards():
    with pytest.raises(ValueError):
        check_identity("gauss2F1", dict(alpha=0.7, beta=1.1, gamma=0.5, x=-0.4))
    with pytest.raises(ValueError):
        check_identity("gauss2F1", dict(alpha=0.7, beta=1.1, gamma=1.9, x=0.4))
    with pytest.raises(ValueError):
        check_identity("gauss2F1", dict(alpha=0.7, beta=1.1, gamma=1.9, x=-1.4))


def test_coefficients_trivial_cases():
    l, m = (0.3 + 0.4j, 0), (0.3 + 0.4j, 0)
    assert duality_coefficient("A", 0, l, m, 2.7) == pytest.approx(1)
    assert duality_coefficient("Ahat", 0, l, m, 2.7) == pytest.approx(1)
    assert duality_coefficient("Atilde", 0, l, m, 2.7) == pytest.approx(1)


def test_ahat_reference():
    l = (-0.7 + 0.2j, 1)
    assert duality_coefficient("Ahat", 0, l, l, 2.3) == pytest.approx(AHAT0, rel=1e-12)


@pytest.mark.parametrize("kind", ["A", "Ahat", "Atilde"])
def test_coefficients_finite_on_a_kappa_grid(kind):
    l = (-0.6 + 0.3j, 1)
    for kappa in np.linspace(1.1, 5.0, 40):
        for b in (0, 1):
            val = duality_coefficient(kind, b, l, l, kappa)
            assert np.isfinite(val) and abs(val) > 0


def test_coefficient_argument_checks():
    with pytest.raises(ValueError):
        duality_coefficient("A", 2, (0.3, 1), (0.3, 1), 2.0)
    with pytest.raises(ValueError):
        duality_coefficient("A", 0, (0.3, 0.5), (0.3, 0.5), 2.0)


DUAL = dict(z=(1 - 0.5j, -1 + 0.4j), lam=(1.3 - 0.4j, -0.7 + 0.6j), kappa=2.7)


def test_dualhint_unit_second_weights():
    l = (-0.6 + 0.3j, 1)
    rep = check_identity("dualhint", dict(l=l, m=l, **DUAL))
    assert rep.passed and rep.max_residual <= 1e-10 and rep.samples == 2


def test_dualhint_with_two_integration_variables():
    l1 = -0.6 + 0.3j
    rep = check_identity("dualhint", dict(l=(l1, 1), m=(l1 - 1, 2), **DUAL))
    assert rep.passed and rep.max_residual <= 1e-8


def test_dualqhint_unit_second_weights():
    l = (-0.7 + 0.2j, 1)
    rep = check_identity("dualqhint", dict(l=l, m=l, z=(0.9 + 0.3j, -0.6 - 0.2j),
                                           lam=(1.1 + 0.5j, -0.4 + 0.9j), kappa=2.3))
    assert rep.passed and rep.max_residual <= 1e-10


def test_identity_argument_checks():
    with pytest.raises(ValueError):
        check_identity("nope", {})
    with pytest.raises(ValueError):
        check_identity("dualhint", dict(l=(0.5, 1), m=(0.2, 1), **DUAL))
