import math

import pytest
from hypothesis import given, strategies as st

from bidwars.errors import BracketError
from bidwars.numerics import NumericsConfig, find_all_roots, find_root, integrate


def test_config_validation():
    with pytest.raises(ValueError):
        NumericsConfig(quad_abs_tol=0.0)
    with pytest.raises(ValueError):
        NumericsConfig(max_iter=5)


def test_integrate_linear_segments():
    assert integrate(lambda q: q, 0.0, 0.5) == pytest.approx(0.125, abs=1e-12)
    assert integrate(lambda q: 1.0 - q, 0.0, 0.5) == pytest.approx(0.375, abs=1e-12)


def test_integrate_matches_closed_forms():
    assert integrate(lambda q: math.exp(-2 * q), 0.0, 40.0) == pytest.approx(0.5, abs=1e-10)
    assert integrate(lambda q: q**3, 0.0, 1.0) == pytest.approx(0.25, abs=1e-10)
    assert integrate(lambda q: math.sin(q), 0.0, math.pi) == pytest.approx(2.0, abs=1e-9)


def test_integrate_empty_and_bad_interval():
    assert integrate(lambda q: q, 0.3, 0.3) == 0.0
    with pytest.raises(ValueError):
        integrate(lambda q: q, 1.0, 0.0)


def test_find_root_basics():
    assert find_root(lambda x: x - 0.5, 0.0, 1.0) == pytest.approx(0.5, abs=1e-12)
    assert find_root(lambda x: x * x - 2.0, 1.0, 2.0) == pytest.approx(math.sqrt(2.0), abs=1e-12)


def test_find_root_requires_bracket():
    with pytest.raises(BracketError):
        find_root(lambda x: x + 1.0, 0.0, 1.0)


def test_find_all_roots_cubic():
    roots = find_all_roots(lambda x: x * (x - 0.5) * (x - 0.9), 0.1, 1.0, n_subdiv=64)
    assert roots == pytest.approx([0.5, 0.9], abs=1e-10)


def test_find_all_roots_constant_is_empty():
    assert find_all_roots(lambda x: 1.0, 0.0, 1.0, n_subdiv=8) == []


def test_find_all_roots_needs_subdivisions():
    with pytest.raises(ValueError):
        find_all_roots(lambda x: x, 0.0, 1.0, n_subdiv=1)


@given(st.floats(min_value=-5.0, max_value=5.0), st.floats(min_value=0.1, max_value=4.0))
def test_root_stays_inside_bracket_and_small_residual(center, width):
    f = lambda x: math.tanh(x - center)
    lo, hi = center - width, center + width
    root = find_root(f, lo, hi)
    assert lo <= root <= hi
    assert abs(f(root)) <= 10 * 1e-12 * max(1.0, 1.0 / width)


@given(
    st.floats(min_value=0.2, max_value=3.0),
    st.floats(min_value=0.0, max_value=1.0),
    st.floats(min_value=1.2, max_value=3.0),
)
def test_quadrature_matches_power_antiderivative(p, a, b):
    exact = (b ** (p + 1) - a ** (p + 1)) / (p + 1)
    assert integrate(lambda q: q**p, a, b) == pytest.approx(exact, abs=1e-10)
