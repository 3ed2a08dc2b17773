import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from app.core.errors import DomainError
from app.geometry.catalog import CATALOG, catalog
from app.geometry.expr import parse
from app.geometry.jet import Jet3, eval_jet

_finite = st.floats(-10.0, 10.0, allow_nan=False)


@pytest.mark.parametrize("text, t0, expected", [
    ("t^3", 2.0, (8.0, 12.0, 12.0, 6.0)),
    ("sin(t)", 0.0, (0.0, 1.0, 0.0, -1.0)),
    ("1/t", 1.0, (1.0, -1.0, 2.0, -6.0)),
    ("sqrt(t)", 4.0, (2.0, 0.25, -1 / 32, 3 / 256)),
    ("exp(2*t)", 0.0, (1.0, 2.0, 4.0, 8.0)),
    ("t^-2", 1.0, (1.0, -2.0, 6.0, -24.0)),
    ("log(t)", 1.0, (0.0, 1.0, -1.0, 2.0)),
])
def test_exact_derivatives(text, t0, expected):
    assert eval_jet(parse(text), t0).astuple() == pytest.approx(expected, rel=1e-14, abs=1e-15)


def test_real_power_matches_sqrt():
    a = eval_jet(parse("t^0.5"), 4.0).astuple()
    b = eval_jet(parse("sqrt(t)"), 4.0).astuple()
    assert a == pytest.approx(b, rel=1e-13)


def test_composition_chain_rule():
    # d/dt sin(t^2) = 2t cos(t^2), d2 = 2cos(t^2) - 4t^2 sin(t^2)
    t = 0.8
    jet = eval_jet(parse("sin(t^2)"), t)
    assert jet.d1 == pytest.approx(2 * t * math.cos(t * t), rel=1e-14)
    assert jet.d2 == pytest.approx(2 * math.cos(t * t) - 4 * t * t * math.sin(t * t), rel=1e-14)


@given(_finite, _finite, _finite, _finite)
@settings(max_examples=100, deadline=None)
def test_quotient_undoes_product(v, d1, d2, d3):
    x = Jet3(v, d1, d2, d3)
    y = Jet3(2.5, -0.5, 0.25, 1.0)
    back = (x * y) / y
    assert back.astuple() == pytest.approx(x.astuple(), rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("text, t0, fragment", [
    ("log(t)", -1.0, "log(t)"),
    ("1/(t - 1)", 1.0, "1 / (t - 1)"),
    ("(t - 1)^-1", 1.0, "(t - 1)^-1"),
    ("t^0.5", -1.0, "t^0.5"),
    ("asin(t)", 2.0, "asin(t)"),
    ("exp(t)", 1000.0, "exp(t)"),
])
def test_domain_errors_name_the_node(text, t0, fragment):
    with pytest.raises(DomainError) as info:
        eval_jet(parse(text), t0)
    assert info.value.node == fragment


def _fd(f, t, h):
    return (f(t - 2 * h) - 8 * f(t - h) + 8 * f(t + h) - f(t + 2 * h)) / (12 * h)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_jets_agree_with_central_differences(name):
    curve = catalog(name)
    rng = np.random.default_rng(20240611)
    lo, hi = curve.domain
    h = 1e-3
    for t in rng.uniform(lo + 3 * h, hi - 3 * h, size=100):
        for expr in curve.components:
            jet = eval_jet(expr, t)
            for exact, lower in ((jet.d1, "v"), (jet.d2, "d1"), (jet.d3, "d2")):
                approx = _fd(lambda x: getattr(eval_jet(expr, x), lower), t, h)
                assert abs(approx - exact) <= 1e-6 * (1 + abs(exact))
