import pytest

from kzlab.glk_rep import enumerate_basis
from kzlab.report import dumps
from kzlab.verifier import (
    ALL_IDENTITIES,
    COVERAGE,
    DIFFERENCE_FAMILIES,
    FLATNESS_FAMILIES,
    check_difference,
    check_flatness,
    run_suite,
    validate_config,
)


def test_single_point_kz_is_vacuous():
    rep = check_flatness(enumerate_basis(2, 1, [2], [1, 1]), "ratKZ", samples=3)
    assert rep.passed and rep.max_residual == 0


@pytest.mark.parametrize("family", FLATNESS_FAMILIES)
def test_flatness_unit_frame(family):
    rep = check_flatness(enumerate_basis(2, 2, [1, 1], [1, 1]), family, samples=10, seed=5)
    assert rep.passed and rep.max_residual <= 1e-9


@pytest.mark.parametrize("family", FLATNESS_FAMILIES)
def test_flatness_controls_fail(family):
    rep = check_flatness(enumerate_basis(2, 2, [1, 1], [1, 1]), family, samples=10, seed=5, control=True)
    assert min(rep.residuals) >= 1e-2


def test_flatness_by_finite_differences():
    rep = check_flatness(enumerate_basis(2, 2, [1, 1], [1, 1]), "ratKZ", samples=5, method="fd")
    assert rep.passed and rep.tolerance == 1e-6


@pytest.mark.parametrize("family", DIFFERENCE_FAMILIES)
def test_difference_unit_frame(family):
    rep = check_difference(enumerate_basis(2, 2, [1, 1], [1, 1]), family, samples=10, seed=5)
    assert rep.passed and rep.max_residual <= 1e-9


@pytest.mark.parametrize("family", ["qDD-braid", "qKZ-commute", "trigKZ-qDD", "qKZ-trigDD"])
def test_difference_controls_fail(family):
    rep = check_difference(enumerate_basis(2, 2, [1, 1], [1, 1]), family, samples=10, seed=5, control=True)
    if rep.residuals:
        assert min(rep.residuals) >= 1e-2


@pytest.mark.parametrize("k, n, l, m", [(1, 2, [1, 2], [3]), (2, 1, [3], [2, 1])])
def test_degenerate_difference_cases(k, n, l, m):
    sp = enumerate_basis(k, n, l, m)
    for fam in ("qDD-braid", "qKZ-commute", "trigKZ-qDD", "qKZ-trigDD"):
        assert check_difference(sp, fam, samples=3).max_residual <= 1e-13


def test_empty_identity_list():
    out = run_suite({"identities": []})
    assert out["reports"] == [] and out["passed"]


def test_coverage_map_is_complete():
    covered = {i for ids in COVERAGE.values() for i in ids}
    assert covered == set(ALL_IDENTITIES)
    cfg = validate_config({})
    assert set(cfg["identities"]) == set(ALL_IDENTITIES)


def test_suite_is_deterministic_and_order_free():
    cfg = {"frames": [{"k": 2, "n": 2, "l": [1, 1], "m": [1, 1]}], "samples": 3, "seed": 11}
    a = dumps(run_suite(cfg))
    b = dumps(run_suite(cfg, threads=4))
    assert a == b


def test_invalid_config():
    with pytest.raises(ValueError):
        validate_config({"identities": ["flatness:nope"]})
    with pytest.raises(ValueError):
        validate_config({"bogus": 1})
