"""Hypothesis strategies shared by the test modules."""
from hypothesis import strategies as st


@st.composite
def small_weight_space(draw, kmax=3, nmax=3, lmax=3):
    """(k, n, l, m) with integer dominant-free weights and sum m = sum l."""
    k = draw(st.integers(1, kmax))
    n = draw(st.integers(1, nmax))
    l = draw(st.lists(st.integers(0, lmax), min_size=n, max_size=n))
    total = sum(l)
    cuts = sorted(draw(st.lists(st.integers(0, total), min_size=k - 1, max_size=k - 1)))
    m = [b - a for a, b in zip([0] + cuts, cuts + [total])]
    return k, n, l, m


def complex_numbers(rmin=0.3, rmax=3.0):
    return st.builds(lambda r, th: complex(r * __import__("cmath").exp(1j * th)),
                     st.floats(rmin, rmax), st.floats(-3.1, 3.1))
