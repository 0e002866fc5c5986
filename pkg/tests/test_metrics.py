import math

import pytest

from bidwars.errors import ModeError, ZeroMarket
from bidwars.metrics import competition, liquid_welfare, market_metrics, q_parameter
from bidwars.valuation import (
    AdvertiserPair,
    Affine,
    Constant,
    ExponentialGrowth,
    Monomial,
    Scaled,
    mirrored_pair,
)


def test_liquid_welfare_mirrored_linear():
    pair = mirrored_pair(Monomial(1.0))
    assert liquid_welfare(pair) == pytest.approx(0.75, abs=1e-12)
    assert liquid_welfare(pair, weights=(1.0, 1.0)) == pytest.approx(1.5, abs=1e-12)


def test_liquid_welfare_lincon():
    for alpha in (2.2, 3.0, 3.9):
        pair = AdvertiserPair(v1=Affine(alpha, 0.0), v2=Constant(1.0))
        assert liquid_welfare(pair) == pytest.approx((alpha**2 + 1) / (2 * alpha), abs=1e-10)


def test_liquid_welfare_identical_curves():
    pair = AdvertiserPair(v1=Monomial(2.0), v2=Monomial(2.0))
    assert liquid_welfare(pair) == pytest.approx(1 / 3, abs=1e-12)


def test_competition_examples():
    assert competition(mirrored_pair(Monomial(1.0))) == pytest.approx(1 / 3, abs=1e-10)
    identical = AdvertiserPair(v1=Monomial(1.5), v2=Monomial(1.5))
    assert competition(identical) == pytest.approx(1.0, abs=1e-12)
    one_sided = AdvertiserPair(v1=Monomial(1.0), v2=Constant(0.0))
    assert competition(one_sided) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ZeroMarket):
        competition(AdvertiserPair(v1=Constant(0.0), v2=Constant(0.0)))


def test_q_parameter_known_values():
    assert q_parameter(mirrored_pair(Monomial(1.0))) == pytest.approx(4 / 3, abs=1e-10)
    assert q_parameter(mirrored_pair(Monomial(2.0))) == pytest.approx(31 / 21, abs=1e-10)


def test_q_parameter_closed_form_for_mirrored_curves():
    # Q = L/H + 2 v'(1/2)/v(1/2)^2 * L for any mirrored increasing curve
    for spec in (Monomial(1.5), Monomial(3.0), ExponentialGrowth(1.0), ExponentialGrowth(2.0)):
        pair = mirrored_pair(spec)
        low = spec.integral(0.0, 0.5)
        high = spec.integral(0.5, 1.0)
        closed = low / high + 2 * spec.slope(0.5) / spec.value(0.5) ** 2 * low
        assert q_parameter(pair) == pytest.approx(closed, rel=1e-9)


def test_q_parameter_exponential_growth_exceeds_one():
    assert q_parameter(mirrored_pair(ExponentialGrowth(1.0))) > 1.0


def test_q_parameter_monomial_grid_exceeds_one():
    for alpha in (1.0, 1.5, 2.0, 3.0, 5.0, 10.0):
        assert q_parameter(mirrored_pair(Monomial(alpha))) > 1.0


def test_q_parameter_fixed_crossing_grid():
    # v(q) = a q + (1-a)/2 keeps v(1/2) = 1/2; the dominance parameter
    # stays above 1 on (0, 1] and collapses to 1 as a -> 0
    for a in (0.25, 0.5, 0.75, 1.0):
        pair = mirrored_pair(Affine(a, (1 - a) / 2))
        q = q_parameter(pair)
        expected = (2 - a) / (2 + a) + a * (2 - a)
        assert q == pytest.approx(expected, rel=1e-9)
        assert q > 1.0
    near_flat = q_parameter(mirrored_pair(Affine(1e-6, (1 - 1e-6) / 2)))
    assert near_flat == pytest.approx(1.0, abs=1e-5)


def test_q_parameter_fixed_slope_grid():
    for beta in (0.0, 0.5, 1.0, 2.0, 5.0):
        pair = mirrored_pair(Affine(1.0, beta))
        assert q_parameter(pair) > 1.0


def test_q_parameter_requires_mirrored():
    pair = AdvertiserPair(v1=Affine(3.0, 0.0), v2=Constant(1.0))
    with pytest.raises(ModeError):
        q_parameter(pair)


def test_scale_invariance():
    for spec in (Monomial(2.0), ExponentialGrowth(1.0)):
        base = mirrored_pair(spec)
        scaled = AdvertiserPair(
            v1=Scaled(spec, 3.7), v2=Scaled(base.v2, 3.7)
        )
        for fn in (competition, q_parameter):
            assert abs(fn(scaled) - fn(base)) <= 1e-12
        mb = market_metrics(base)
        ms = market_metrics(scaled)
        assert abs(ms.e1_at_qeff - mb.e1_at_qeff) <= 1e-12


def test_market_metrics_block():
    m = market_metrics(mirrored_pair(Monomial(1.0)), weights=(1.0, 1.0))
    assert m.w_star == pytest.approx(1.5, abs=1e-10)
    assert m.competition == pytest.approx(1 / 3, abs=1e-10)
    assert m.e_at_qeff == pytest.approx(4.0, abs=1e-9)
    assert m.q_param == pytest.approx(4 / 3, abs=1e-9)
    assert m.low_value == pytest.approx(1 / 8, abs=1e-10)
    assert m.high_value == pytest.approx(3 / 8, abs=1e-10)

    lincon = market_metrics(AdvertiserPair(v1=Affine(2.5, 0.0), v2=Constant(1.0)))
    assert lincon.q_param is None
    assert lincon.e_at_qeff is None
    assert lincon.e2_at_qeff == pytest.approx(2.0, rel=1e-9)


def test_competition_equals_low_over_high_when_mirrored():
    for spec in (Monomial(1.0), Monomial(2.0), ExponentialGrowth(1.5)):
        m = market_metrics(mirrored_pair(spec))
        assert m.competition == pytest.approx(m.low_value / m.high_value, rel=1e-9)
