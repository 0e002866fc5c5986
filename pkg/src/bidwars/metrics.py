"""Scalar market diagnostics: liquid welfare, competition, and the
dominance parameter that decides the platforms' format choice in the
inefficiency-free setting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import ModeError, ZeroMarket
from .numerics import DEFAULT_NUMERICS, NumericsConfig, find_all_roots
from .valuation import AdvertiserPair, bid_reaction, efficient_threshold

__all__ = [
    "MarketMetrics",
    "liquid_welfare",
    "competition",
    "q_parameter",
    "market_metrics",
]


@dataclass(frozen=True)
class MarketMetrics:
    """Summary block attached to every report.

    ``q_param`` is populated only for mirrored inputs, where all subgames
    allocate efficiently and the single number E * (L/H) classifies the
    platform game.
    """

    w_star: float
    low_value: float  # L: losers' value mass at the efficient split
    high_value: float  # H: winners' value mass at the efficient split
    competition: float
    e1_at_qeff: float
    e2_at_qeff: float
    e_at_qeff: Optional[float]
    q_param: Optional[float]

    def to_dict(self) -> dict:
        return {
            "w_star": self.w_star,
            "low_value": self.low_value,
            "high_value": self.high_value,
            "competition": self.competition,
            "e1_at_qeff": self.e1_at_qeff,
            "e2_at_qeff": self.e2_at_qeff,
            "e_at_qeff": self.e_at_qeff,
            "q_param": self.q_param,
        }


def _crossings(pair: AdvertiserPair, config: NumericsConfig) -> list:
    lo = pair.domain[0]
    hi = pair.scan_upper()
    eps = 1e-9 * max(hi - lo, 1.0)
    diff = lambda q: pair.v1.value(q) - pair.v2.value(q)
    return find_all_roots(diff, lo + eps, hi - eps, n_subdiv=512, config=config)


def _minmax_masses(pair: AdvertiserPair, config: NumericsConfig) -> tuple:
    """Integrals of pointwise max and min of the two curves."""
    lo, hi = pair.domain
    top = pair.scan_upper()
    cuts = [lo] + _crossings(pair, config) + [top]
    total_max = total_min = 0.0
    for a, b in zip(cuts, cuts[1:]):
        mid = 0.5 * (a + b)
        ub = hi if (b == top and hi != math.inf) else b
        seg1 = pair.v1.integral(a, ub)
        seg2 = pair.v2.integral(a, ub)
        if pair.v1.value(mid) >= pair.v2.value(mid):
            total_max += seg1
            total_min += seg2
        else:
            total_max += seg2
            total_min += seg1
    return total_max, total_min


def liquid_welfare(
    pair: AdvertiserPair,
    weights: Optional[Sequence[float]] = None,
    config: NumericsConfig = DEFAULT_NUMERICS,
) -> float:
    """Value of the efficient allocation, summed over platform weights.

    Each platform contributes its weight times the integral of the
    pointwise-best valuation; this caps total platform revenue.
    """
    total_max, _ = _minmax_masses(pair, config)
    w = sum(weights) if weights is not None else 1.0
    return w * total_max


def competition(pair: AdvertiserPair, config: NumericsConfig = DEFAULT_NUMERICS) -> float:
    """How close the two demand curves run: 1 minus the normalized gap.

    Equals (integral of the lower curve) / (integral of the upper curve);
    1 for identical curves, 0 when only one advertiser has value.
    """
    total_max, total_min = _minmax_masses(pair, config)
    if total_max <= 0.0:
        raise ZeroMarket("no positive valuation mass anywhere")
    return total_min / total_max


def q_parameter(pair: AdvertiserPair, config: NumericsConfig = DEFAULT_NUMERICS) -> float:
    """Dominance parameter E * L/H for mirrored (inefficiency-free) pairs.

    Above 1 the second-price format dominates for every platform; below 1
    first price does; at 1 the platform game is degenerate. For mirrored
    curves this reduces to L/H + 2 v'(1/2) / v(1/2)^2 * L.
    """
    if not pair.is_mirrored():
        raise ModeError("dominance parameter requires a mirrored pair")
    q_eff = efficient_threshold(pair, config)
    low = pair.head1(q_eff)
    high = pair.tail1(q_eff)
    return bid_reaction(pair, 1, q_eff) * low / high


def market_metrics(
    pair: AdvertiserPair,
    weights: Optional[Sequence[float]] = None,
    config: NumericsConfig = DEFAULT_NUMERICS,
) -> MarketMetrics:
    """Assemble the metrics block; the dominance parameter only when it applies."""
    w_star = liquid_welfare(pair, weights, config)
    c_a = competition(pair, config)
    q_eff = efficient_threshold(pair, config)
    e1 = bid_reaction(pair, 1, q_eff)
    e2 = bid_reaction(pair, 2, q_eff)
    low = 0.5 * (pair.head1(q_eff) + pair.tail2(q_eff))
    high = 0.5 * (pair.tail1(q_eff) + pair.head2(q_eff))
    mirrored = pair.is_mirrored()
    return MarketMetrics(
        w_star=w_star,
        low_value=low,
        high_value=high,
        competition=c_a,
        e1_at_qeff=e1,
        e2_at_qeff=e2,
        e_at_qeff=e1 if mirrored else None,
        q_param=q_parameter(pair, config) if mirrored else None,
    )
