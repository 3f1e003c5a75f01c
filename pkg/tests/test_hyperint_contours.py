import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kzlab.hyperint.contours import build_contour, line_path, loop_path


@pytest.mark.parametrize("direction", [1.0, 1j, np.exp(2.2j)])
def test_loop_encircles_its_center_counterclockwise(direction):
    # single-valued integrand: the rays cancel and only the residue at the center remains
    c = 0.3 - 0.2j
    path = loop_path(c, direction, 0.25, 60.0, 30)
    d = complex(direction) / abs(direction)
    val = np.sum(path.weights * np.exp(-(path.nodes - c) / d) / (path.nodes - c))
    assert val == pytest.approx(2j * np.pi, rel=1e-12)


def test_gamma_single_loop_geometry():
    z = (0.3 - 0.5j, -0.2 + 0.5j)
    c = build_contour("gamma_d", (1, 0), z, {"lam": (1 + 0.2j, -0.5 + 0.1j), "kappa": 2.3, "l": (1, 1)})
    assert c.r == 1
    assert c.geometry["h"] == pytest.approx(0.2)  # 0.2 times the imaginary gap of 1
    p = c.paths[0]
    assert np.min(np.abs(p.nodes - z[0])) == pytest.approx(0.2, rel=1e-6)
    # the tail reaches the decay of exp(-Re((lam1 - lam2)/kappa) x) below the target
    nu = ((1 + 0.2j) - (-0.5 + 0.1j)) / 2.3
    assert np.exp(-nu.real * (p.nodes.real.max() - z[0].real)) < 1e-16


def test_gamma_nested_loops_grow_outward():
    z = (0.3 - 0.5j, -0.2 + 0.5j)
    c = build_contour("gamma_d", (2, 0), z, {"lam": (1, -0.5), "kappa": 2.3})
    inner, outer = (np.min(np.abs(p.nodes - z[0])) for p in c.paths)
    assert outer == pytest.approx(1.5 * inner, rel=1e-6)


def test_gamma_contour_preconditions():
    with pytest.raises(ValueError):
        build_contour("gamma_d", (1, 0), (0.5j, -0.5j), {"lam": (1, -1), "kappa": 1})
    with pytest.raises(ValueError):
        build_contour("gamma_d", (1, 0), (-0.5j, 0.5j), {"lam": (-1, 1), "kappa": 1})


def test_mellin_barnes_plane():
    c = build_contour("mb_plane", (1, 0), (0.1, 0.2), {"eps": 0.5, "T": 30})
    np.testing.assert_allclose(c.paths[0].nodes.real, 0.5)
    assert c.paths[0].nodes.imag.min() > -30 and c.paths[0].nodes.imag.max() < 30


def test_empty_contour():
    assert build_contour("gamma_d", (0, 0), (-0.5j, 0.5j), {"lam": (1, -1), "kappa": 1}).r == 0


def test_delta_loop_does_not_enclose_origin():
    c = build_contour("delta_d", (1, 0), (1.0 + 0.3j, -0.4 + 0.9j), {"tail_power": -3.0})
    assert np.min(np.abs(c.paths[0].nodes)) > 0.5


@settings(max_examples=30, deadline=None)
@given(st.floats(-0.5, 0.5), st.floats(0.3, 2.0))
def test_refinement_error_bounds_the_true_error(eps, width):
    # Gaussian along a vertical line: int exp((s - eps)^2) ds = i sqrt(pi)
    f = lambda s: np.exp((s - eps) ** 2)
    exact = 1j * np.sqrt(np.pi)
    coarse, fine = (np.sum(p.weights * f(p.nodes)) for p in
                    (line_path(eps, 9.0, 6, 0, width), line_path(eps, 9.0, 6, 1, width)))
    assert abs(fine - exact) <= max(abs(fine - coarse), 1e-14)
