import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as sp_integrate

from app.core.errors import DepthExceeded, NonFinite, OutOfRange
from app.geometry.numerics import (CumulativeTable, QuadConfig, cumulative, integrate,
                                   invert_monotone)


def test_integrate_sine_over_half_period():
    assert integrate(math.sin, 0.0, math.pi) == pytest.approx(2.0, abs=1e-9)


def test_integrate_matches_scipy_quad():
    f = lambda x: math.exp(-x * x) * math.cos(3 * x)
    expected, _ = sp_integrate.quad(f, 0.0, 2.0, epsabs=1e-13, epsrel=1e-13)
    assert integrate(f, 0.0, 2.0) == pytest.approx(expected, abs=1e-9)


def test_vector_integrand_is_one_pass():
    result = integrate(lambda x: np.array([math.cos(x), math.sin(x), 1.0]), 0.0, math.pi / 2)
    assert result.shape == (3,)
    np.testing.assert_allclose(result, [1.0, 1.0, math.pi / 2], atol=1e-9)


def test_reversed_bounds_negate():
    f = lambda x: x ** 3 - x
    assert integrate(f, 2.0, -1.0) == pytest.approx(-integrate(f, -1.0, 2.0), abs=1e-12)


def test_empty_interval_is_zero():
    assert integrate(math.exp, 1.5, 1.5) == 0.0


@given(st.floats(-3.0, 3.0), st.floats(-3.0, 3.0))
@settings(max_examples=60, deadline=None)
def test_integrate_cosine_antiderivative(a, b):
    assert integrate(math.cos, a, b) == pytest.approx(math.sin(b) - math.sin(a), abs=1e-8)


def test_non_finite_integrand_raises():
    with pytest.raises(NonFinite):
        integrate(lambda x: math.nan, 0.0, 1.0)


def test_depth_limit_raises():
    cfg = QuadConfig(abs_tol=1e-14, rel_tol=1e-14, max_depth=3, min_depth=0)
    with pytest.raises(DepthExceeded):
        integrate(math.sqrt, 0.0, 1.0, cfg)


def test_cumulative_table_tracks_antiderivative():
    table = cumulative(math.cos, 0.0, math.pi, 33)
    np.testing.assert_allclose(table.values, np.sin(table.grid), atol=1e-9)
    assert table.value_at(1.234) == pytest.approx(math.sin(1.234), abs=1e-9)
    assert table.span == pytest.approx((0.0, 0.0), abs=1e-9)


def test_table_without_integrand_interpolates_linearly():
    table = CumulativeTable.from_values([0.0, 1.0, 3.0], [0.0, 2.0, 4.0])
    assert table.value_at(0.5) == pytest.approx(1.0)
    assert table.value_at(2.0) == pytest.approx(3.0)


def test_table_rejects_unsorted_grid():
    with pytest.raises(ValueError):
        CumulativeTable.from_values([0.0, 2.0, 1.0], [0.0, 1.0, 2.0])


def test_table_columns_are_read_only():
    table = CumulativeTable.from_values([0.0, 1.0], [0.0, 1.0])
    with pytest.raises(ValueError):
        table.values[0] = 5.0


@pytest.mark.parametrize("x", [0.0, 0.37, 1.3, 2.0])
def test_invert_monotone_recovers_parameter(x):
    table = cumulative(lambda t: 1 + t * t, 0.0, 2.0, 17)
    target = x + x ** 3 / 3
    assert invert_monotone(table, target) == pytest.approx(x, abs=1e-8)


def test_invert_monotone_handles_flat_integrand_spots():
    # у F(x) = (x^3 + 1) / 3 нулевой наклон в x = 0
    table = cumulative(lambda t: t * t, -1.0, 1.0, 9)
    assert invert_monotone(table, (0.1 ** 3 + 1) / 3) == pytest.approx(0.1, abs=1e-6)
    assert invert_monotone(table, 1 / 3) == pytest.approx(0.0, abs=1e-3)


def test_invert_monotone_out_of_span():
    table = cumulative(lambda t: 1.0, 0.0, 1.0, 5)
    with pytest.raises(OutOfRange):
        invert_monotone(table, 1.5)


@pytest.mark.parametrize("x", [0.3, 1.1, 1.9])
def test_invert_monotone_between_grid_nodes(x):
    # на грубой сетке отрезок сдвигается несколько раз внутри одной ячейки
    table = cumulative(lambda t: 1 + t * t, 0.0, 2.0, 3)
    assert invert_monotone(table, x + x ** 3 / 3) == pytest.approx(x, abs=1e-9)


def test_invert_monotone_on_steep_integrand():
    table = cumulative(math.exp, 0.0, 3.0, 4)
    assert invert_monotone(table, math.exp(1.7) - 1) == pytest.approx(1.7, abs=1e-9)


@given(st.floats(-3.0, 3.0), st.floats(-3.0, 3.0), st.floats(0.0, 1.0))
@settings(max_examples=50, deadline=None)
def test_integral_is_additive(a, b, frac):
    f = lambda x: math.exp(math.sin(x))
    m = a + frac * (b - a)
    assert integrate(f, a, b) == pytest.approx(integrate(f, a, m) + integrate(f, m, b), abs=1e-8)


@pytest.mark.parametrize("half_width", [0.5, 2.0, math.pi])
def test_odd_integrand_vanishes(half_width):
    assert integrate(lambda x: x ** 3 * math.cos(x), -half_width, half_width) == pytest.approx(0.0, abs=1e-9)


def test_elliptic_integrand_against_dense_simpson():
    x = np.linspace(0.0, 2 * math.pi, 1_000_001)
    oracle = sp_integrate.simpson(np.sqrt(1 - 0.5 * np.sin(x) ** 2), x=x)
    value = integrate(lambda s: math.sqrt(1 - 0.5 * math.sin(s) ** 2), 0.0, 2 * math.pi)
    assert value == pytest.approx(oracle, rel=1e-9)


def _example_speed(s: float) -> float:
    return math.sqrt(1 + math.cos(s) ** 2)


def test_cumulative_nodes_match_direct_integrals():
    table = cumulative(_example_speed, 0.0, 2 * math.pi, 101)
    direct = [integrate(_example_speed, 0.0, float(x)) for x in table.grid]
    np.testing.assert_allclose(table.values, direct, atol=1e-9)


def test_cumulative_is_stable_under_refinement():
    coarse = cumulative(_example_speed, 0.0, 2 * math.pi, 101)
    fine = cumulative(_example_speed, 0.0, 2 * math.pi, 201)
    np.testing.assert_allclose(fine.values[::2], coarse.values, atol=1e-7)
