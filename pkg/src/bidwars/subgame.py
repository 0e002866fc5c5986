"""Bidding-equilibrium solvers for a fixed profile of platform auctions.

Platforms carry identical inventory up to a positive weight (market share
or a full copy), so a profile is solved by merging platforms of the same
format into one aggregate and splitting revenue back by weight. The mixed
first-price/second-price case reduces to one scalar equation: a scan over
the first-price threshold, with the second-price threshold, all four
multipliers and advertiser 1's budget resolved in closed form at each
candidate, leaves advertiser 2's budget as the residual to drive to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    DegenerateSolution,
    NoConvergence,
    NoInteriorEquilibrium,
    SaturatedLandscape,
)
from .numerics import DEFAULT_NUMERICS, NumericsConfig, find_root
from .valuation import (
    AdvertiserPair,
    ValuationSpec,
    bid_reaction,
    efficient_threshold,
)

__all__ = [
    "Format",
    "AuctionProfile",
    "parse_profile",
    "LandscapeView",
    "SubgameSolution",
    "marginal_cost",
    "check_existence_condition",
    "solve_profile",
    "solve_fpa_fpa",
    "solve_spa_spa",
    "solve_fpa_spa",
    "solve_uniform_mode",
    "solve_single_strategic",
]


class Format(str, Enum):
    FPA = "FPA"
    SPA = "SPA"


AuctionProfile = Tuple[Format, ...]


def parse_profile(text: str) -> AuctionProfile:
    """Parse 'SPA,FPA' style profile strings."""
    parts = [p.strip().upper() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("profile must name at least one platform format")
    try:
        return tuple(Format(p) for p in parts)
    except ValueError:
        raise ValueError(f"profile entries must be FPA or SPA, got {text!r}") from None


# ---------------------------------------------------------------------------
# Bid landscapes


class LandscapeView:
    """Aggregate value/cost an advertiser faces on one platform.

    ``V(mu)`` is the value won at multiplier mu, ``C(mu)`` the spend, and
    ``saturation_bid`` the multiplier beyond which the advertiser wins the
    whole platform (``inf`` when no finite bid achieves that).
    """

    def __init__(self, value_fn, cost_fn, slope_fn, saturation_bid: float):
        self._value = value_fn
        self._cost = cost_fn
        self._slope = slope_fn
        self.saturation_bid = saturation_bid

    def V(self, mu: float) -> float:
        return self._value(mu)

    def C(self, mu: float) -> float:
        return self._cost(mu)

    def V_slope(self, mu: float) -> float:
        return self._slope(mu)

    @staticmethod
    def endogenous(
        pair: AdvertiserPair,
        advertiser: int,
        fmt: Format,
        opponent_multiplier: float,
        weight: float = 1.0,
        config: NumericsConfig = DEFAULT_NUMERICS,
    ) -> "LandscapeView":
        """Landscape induced by the opponent's uniform bid on one platform."""
        lo, hi = pair.domain
        scan_hi = pair.scan_upper()
        mu_opp = opponent_multiplier

        def threshold(mu: float) -> float:
            # crossing of mu*v_own and mu_opp*v_opp; clamped to the domain
            if advertiser == 1:
                diff = lambda q: mu * pair.v1.value(q) - mu_opp * pair.v2.value(q)
            else:
                diff = lambda q: mu_opp * pair.v1.value(q) - mu * pair.v2.value(q)
            eps = 1e-12
            if diff(lo + eps) >= 0.0:
                return lo
            if diff(scan_hi) <= 0.0:
                return scan_hi if hi == math.inf else hi
            return find_root(diff, lo + eps, scan_hi, config)

        if advertiser == 1:
            value_fn = lambda mu: weight * pair.tail1(threshold(mu))
            opp_mass = lambda mu: weight * pair.tail2(threshold(mu))
            h0 = pair.h(lo + 1e-12)
            sat = math.inf if h0 <= 0.0 else mu_opp / h0
        else:
            value_fn = lambda mu: weight * pair.head2(threshold(mu))
            opp_mass = lambda mu: weight * pair.head1(threshold(mu))
            h_top = pair.h(hi - 1e-12) if hi != math.inf else math.inf
            sat = math.inf if not math.isfinite(h_top) else mu_opp * h_top

        if fmt is Format.FPA:
            cost_fn = lambda mu: mu * value_fn(mu)
        else:
            cost_fn = lambda mu: mu_opp * opp_mass(mu)

        def slope_fn(mu: float, _v=value_fn) -> float:
            d = 1e-6 * max(mu, 1.0)
            return (_v(mu + d) - _v(mu - d)) / (2.0 * d)

        return LandscapeView(value_fn, cost_fn, slope_fn, sat)

    @staticmethod
    def from_static_curve(
        own: ValuationSpec,
        static_curve: ValuationSpec,
        fmt: Format,
        weight: float = 1.0,
        config: NumericsConfig = DEFAULT_NUMERICS,
    ) -> "LandscapeView":
        """Landscape against a fixed truthful bid curve on one platform."""
        from .numerics import find_all_roots

        lo, hi = own.domain
        scan_hi = 1.0 if hi == 1.0 else 60.0

        def win_intervals(mu: float) -> List[Tuple[float, float]]:
            diff = lambda q: mu * own.value(q) - static_curve.value(q)
            cuts = find_all_roots(diff, lo, scan_hi, n_subdiv=256, config=config)
            edges = [lo] + cuts + [scan_hi]
            out = []
            for a, b in zip(edges, edges[1:]):
                if b - a > 1e-12 and diff(0.5 * (a + b)) >= 0.0:
                    ub = hi if (b == scan_hi and hi != math.inf) else b
                    out.append((a, ub if b != scan_hi or hi == math.inf else hi))
            return out

        def value_fn(mu: float) -> float:
            if mu <= 0.0:
                return 0.0
            return weight * sum(own.integral(a, min(b, scan_hi)) for a, b in win_intervals(mu))

        def static_mass(mu: float) -> float:
            return weight * sum(
                static_curve.integral(a, min(b, scan_hi)) for a, b in win_intervals(mu)
            )

        if fmt is Format.FPA:
            cost_fn = lambda mu: mu * value_fn(mu)
        else:
            cost_fn = static_mass

        def slope_fn(mu: float) -> float:
            d = 1e-6 * max(mu, 1.0)
            return (value_fn(mu + d) - value_fn(mu - d)) / (2.0 * d)

        # winning everything needs mu >= max of static/own ratio
        ratio_hi = 0.0
        for i in range(513):
            q = lo + (scan_hi - lo) * i / 512
            v = own.value(q)
            s = static_curve.value(q)
            if v <= 0.0 and s > 0.0:
                ratio_hi = math.inf
                break
            if v > 0.0:
                ratio_hi = max(ratio_hi, s / v)
        return LandscapeView(value_fn, cost_fn, slope_fn, ratio_hi)


def marginal_cost(fmt: Format, mu: float, landscape: LandscapeView) -> float:
    """Incremental spend per incremental value at bid multiplier mu.

    Second price: the multiplier itself. First price: mu plus V/V', the
    extra payment on inventory already won.
    """
    if fmt is Format.SPA:
        return mu
    if mu >= landscape.saturation_bid:
        raise SaturatedLandscape("bid already wins the whole platform")
    slope = landscape.V_slope(mu)
    if slope <= 0.0:
        raise SaturatedLandscape("aggregate value is flat at this bid")
    return mu + landscape.V(mu) / slope


# ---------------------------------------------------------------------------
# Solution record


@dataclass
class SubgameSolution:
    """Equilibrium of the advertisers' bidding subgame for one profile."""

    mode: str
    profile: Tuple[str, ...]
    weights: Tuple[float, ...]
    multipliers: Tuple[Tuple[float, ...], ...]  # [advertiser][platform]
    thresholds: Tuple[Optional[float], ...]  # per platform
    revenues: Tuple[float, ...]  # per platform
    values: Tuple[float, ...]  # per advertiser
    spends: Tuple[float, ...]  # per advertiser
    marginal_costs: Tuple[Tuple[Optional[float], ...], ...]
    residuals: Dict[str, float] = field(default_factory=dict)
    flags: Tuple[str, ...] = ()

    @property
    def total_revenue(self) -> float:
        return sum(self.revenues)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "profile": list(self.profile),
            "weights": list(self.weights),
            "multipliers": [list(row) for row in self.multipliers],
            "thresholds": list(self.thresholds),
            "revenues": list(self.revenues),
            "total_revenue": self.total_revenue,
            "values": list(self.values),
            "spends": list(self.spends),
            "marginal_costs": [list(row) for row in self.marginal_costs],
            "residuals": dict(sorted(self.residuals.items())),
            "flags": list(self.flags),
        }


def _normalize_weights(profile: AuctionProfile, weights: Optional[Sequence[float]]) -> Tuple[float, ...]:
    if weights is None:
        return tuple(1.0 for _ in profile)
    if len(weights) != len(profile):
        raise ValueError("weights must match the number of platforms")
    if any(w <= 0 for w in weights):
        raise ValueError("platform weights must be positive")
    return tuple(float(w) for w in weights)


# ---------------------------------------------------------------------------
# Degenerate one-sided markets


def _one_sided_solution(
    pair: AdvertiserPair, profile: AuctionProfile, weights: Tuple[float, ...]
) -> Optional[SubgameSolution]:
    lo, hi = pair.domain
    tot1, tot2 = pair.tail1(lo), pair.tail2(lo)
    if tot1 > 0.0 and tot2 > 0.0:
        return None
    # the empty advertiser bids its undominated floor and wins nothing
    winner = 1 if tot1 > 0.0 else 2
    win_val = tot1 if winner == 1 else tot2
    mults = [[0.0] * len(profile), [0.0] * len(profile)]
    revenues = []
    for j, fmt in enumerate(profile):
        mults[winner - 1][j] = 1.0
        mults[2 - winner][j] = 1.0
        # against a zero-valued opponent the winner pays nothing on SPA and
        # its own (truthful-floor) bid on FPA
        revenues.append(weights[j] * win_val if fmt is Format.FPA else 0.0)
    values = [0.0, 0.0]
    spends = [0.0, 0.0]
    values[winner - 1] = win_val * sum(weights)
    spends[winner - 1] = sum(revenues)
    return SubgameSolution(
        mode="per_platform",
        profile=tuple(f.value for f in profile),
        weights=weights,
        multipliers=tuple(tuple(r) for r in mults),
        thresholds=tuple(None for _ in profile),
        revenues=tuple(revenues),
        values=tuple(values),
        spends=tuple(spends),
        marginal_costs=((None,) * len(profile),) * 2,
        flags=("degenerate_allocation",),
    )


# ---------------------------------------------------------------------------
# Merged-group solvers (identical inventory up to weight)


def _interior_scan(pair: AdvertiserPair, n: int) -> List[float]:
    lo, hi = pair.domain
    if hi == math.inf:
        top = pair.scan_upper()
        # uniform in exp(-q): resolves the region where the curves live
        smin = math.exp(-top)
        return [-math.log(smin + (1.0 - 1e-7 - smin) * (i + 0.5) / n) for i in range(n)]
    span = hi - lo
    eps = 1e-7 * span
    return [lo + eps + (span - 2 * eps) * i / (n - 1) for i in range(n)]


def _invert_h(pair: AdvertiserPair, target: float, config: NumericsConfig) -> Optional[float]:
    """Solve h(q) = target for the (non-decreasing) valuation ratio."""
    lo, hi = pair.domain
    top = pair.scan_upper()
    eps = 1e-9 * max(top - lo, 1.0)
    a, b = lo + eps, top - eps
    ha, hb = pair.h(a), pair.h(b)
    if target < ha or (math.isfinite(hb) and target > hb):
        return None
    if not math.isfinite(hb):
        # shrink from the top until the ratio is finite and above target
        while b - a > 1e-12 and not math.isfinite(pair.h(b)):
            b = a + 0.9 * (b - a)
        if pair.h(b) < target:
            return None
    return find_root(lambda q: pair.h(q) - target, a, b, config)


def _solve_all_fpa(
    pair: AdvertiserPair,
    profile: AuctionProfile,
    weights: Tuple[float, ...],
    config: NumericsConfig,
) -> SubgameSolution:
    q_eff = efficient_threshold(pair, config)
    total_w = sum(weights)
    top_val = pair.tail1(q_eff)
    bottom_val = pair.head2(q_eff)
    per_unit_rev = top_val + bottom_val
    mc1 = bid_reaction(pair, 1, q_eff)
    mc2 = bid_reaction(pair, 2, q_eff)
    return SubgameSolution(
        mode="per_platform",
        profile=tuple(f.value for f in profile),
        weights=weights,
        multipliers=((1.0,) * len(profile), (1.0,) * len(profile)),
        thresholds=(q_eff,) * len(profile),
        revenues=tuple(w * per_unit_rev for w in weights),
        values=(total_w * top_val, total_w * bottom_val),
        spends=(total_w * top_val, total_w * bottom_val),
        marginal_costs=((mc1,) * len(profile), (mc2,) * len(profile)),
        residuals={"budget_1": 0.0, "budget_2": 0.0},
    )


def _spa_threshold_equation(pair: AdvertiserPair, q: float) -> float:
    return pair.tail1(q) * pair.head1(q) - pair.h(q) * pair.tail2(q) * pair.head2(q)


def _solve_all_spa(
    pair: AdvertiserPair,
    profile: AuctionProfile,
    weights: Tuple[float, ...],
    config: NumericsConfig,
) -> SubgameSolution:
    flags: List[str] = []
    grid = _interior_scan(pair, 192)
    vals = [_spa_threshold_equation(pair, q) for q in grid]
    roots: List[float] = []
    for (qa, fa), (qb, fb) in zip(zip(grid, vals), zip(grid[1:], vals[1:])):
        if fa == 0.0:
            roots.append(qa)
        elif fa * fb < 0.0:
            roots.append(find_root(lambda q: _spa_threshold_equation(pair, q), qa, qb, config))
    if not roots:
        raise NoInteriorEquilibrium("second-price threshold equation has no interior root")
    if len(roots) > 1:
        flags.append("uniqueness_unverified")
    q_s = roots[0]
    head1, head2 = pair.head1(q_s), pair.head2(q_s)
    tail1, tail2 = pair.tail1(q_s), pair.tail2(q_s)
    if min(head1, head2, tail1, tail2) <= 0.0:
        raise NoInteriorEquilibrium("second-price equilibrium collapses to a boundary")
    mu1 = head2 / head1
    mu2 = tail1 / tail2
    if not (pair.h_is_convex() and _sampled_nonincreasing(pair.v2, pair)):
        if "uniqueness_unverified" not in flags:
            flags.append("uniqueness_unverified")
    total_w = sum(weights)
    per_unit_rev = head2 + tail1  # both targets bind, so revenue = winners' value
    threshold_resid = abs(mu1 * pair.v1.value(q_s) - mu2 * pair.v2.value(q_s))
    return SubgameSolution(
        mode="per_platform",
        profile=tuple(f.value for f in profile),
        weights=weights,
        multipliers=((mu1,) * len(profile), (mu2,) * len(profile)),
        thresholds=(q_s,) * len(profile),
        revenues=tuple(w * per_unit_rev for w in weights),
        values=(total_w * tail1, total_w * head2),
        spends=(total_w * mu2 * tail2, total_w * mu1 * head1),
        marginal_costs=((mu1,) * len(profile), (mu2,) * len(profile)),
        residuals={
            "budget_1": total_w * (mu2 * tail2 - tail1),
            "budget_2": total_w * (mu1 * head1 - head2),
            "threshold_spa": threshold_resid,
        },
        flags=tuple(flags),
    )


def _sampled_nonincreasing(spec: ValuationSpec, pair: AdvertiserPair) -> bool:
    qs = _interior_scan(pair, 65)
    vals = [spec.value(q) for q in qs]
    return all(b <= a * (1 + 1e-9) + 1e-12 for a, b in zip(vals, vals[1:]))


def _sampled_nondecreasing(spec: ValuationSpec, pair: AdvertiserPair) -> bool:
    qs = _interior_scan(pair, 65)
    vals = [spec.value(q) for q in qs]
    return all(b >= a * (1 - 1e-9) - 1e-12 for a, b in zip(vals, vals[1:]))


@dataclass(frozen=True)
class _MixedCandidate:
    q_f: float
    q_s: float
    mu1_f: float
    mu1_s: float
    mu2_f: float
    mu2_s: float
    residual: float


def _mixed_candidate(
    pair: AdvertiserPair,
    q_f: float,
    w_f: float,
    w_s: float,
    config: NumericsConfig,
) -> Optional[_MixedCandidate]:
    """Resolve everything implied by a candidate first-price threshold.

    The first-price threshold fixes the within-platform multiplier ratio;
    the per-advertiser SPA/FPA ratios then locate the second-price
    threshold, and advertiser 1's budget pins the absolute scale.
    Advertiser 2's budget is returned as the residual.
    """
    h_f = pair.h(q_f)
    if not math.isfinite(h_f) or h_f <= 0.0:
        return None
    try:
        r1 = bid_reaction(pair, 1, q_f)
        r2 = bid_reaction(pair, 2, q_f)
    except Exception:
        return None
    if r1 <= 0.0 or r2 <= 0.0:
        return None
    q_s = _invert_h(pair, h_f * r2 / r1, config)
    if q_s is None:
        return None
    a = pair.tail1(q_f)
    c = pair.tail1(q_s)
    b = pair.tail2(q_s)
    d = pair.head2(q_f)
    e = pair.head1(q_s)
    g = pair.head2(q_s)
    denom = w_f * a / h_f + r2 * w_s * b
    if denom <= 0.0:
        return None
    mu2_f = (w_f * a + w_s * c) / denom
    mu1_f = mu2_f / h_f
    mu1_s = r1 * mu1_f
    mu2_s = r2 * mu2_f
    residual = mu2_f * w_f * d + mu1_s * w_s * e - (w_f * d + w_s * g)
    return _MixedCandidate(q_f, q_s, mu1_f, mu1_s, mu2_f, mu2_s, residual)


def _solve_mixed(
    pair: AdvertiserPair,
    profile: AuctionProfile,
    weights: Tuple[float, ...],
    config: NumericsConfig,
) -> SubgameSolution:
    w_f = sum(w for w, f in zip(weights, profile) if f is Format.FPA)
    w_s = sum(w for w, f in zip(weights, profile) if f is Format.SPA)
    flags: List[str] = []
    if not (
        _sampled_nondecreasing(pair.v1, pair)
        and _sampled_nonincreasing(pair.v2, pair)
        and pair.h_is_convex()
        and pair.v1.value(pair.domain[0]) == 0.0
    ):
        flags.append("uniqueness_unverified")

    grid = _interior_scan(pair, 160)
    prev: Optional[_MixedCandidate] = None
    root: Optional[_MixedCandidate] = None
    for q in grid:
        cand = _mixed_candidate(pair, q, w_f, w_s, config)
        if cand is None:
            prev = None
            continue
        if cand.residual == 0.0:
            root = cand
            break
        if prev is not None and prev.residual * cand.residual < 0.0:
            q_star = find_root(
                lambda x: _mixed_candidate(pair, x, w_f, w_s, config).residual,
                prev.q_f,
                cand.q_f,
                config,
            )
            root = _mixed_candidate(pair, q_star, w_f, w_s, config)
            break
        prev = cand
    if root is None:
        raise NoInteriorEquilibrium("mixed-format budget residual has no interior root")
    mus = (root.mu1_f, root.mu1_s, root.mu2_f, root.mu2_s)
    if min(mus) <= 0.0:
        raise DegenerateSolution(f"non-positive multiplier in mixed solution: {mus}")

    q_f, q_s = root.q_f, root.q_s
    per_unit_rev_f = root.mu2_f * pair.head2(q_f) + root.mu1_f * pair.tail1(q_f)
    per_unit_rev_s = root.mu1_s * pair.head1(q_s) + root.mu2_s * pair.tail2(q_s)
    value_1 = w_f * pair.tail1(q_f) + w_s * pair.tail1(q_s)
    value_2 = w_f * pair.head2(q_f) + w_s * pair.head2(q_s)
    spend_1 = root.mu1_f * w_f * pair.tail1(q_f) + root.mu2_s * w_s * pair.tail2(q_s)
    spend_2 = root.mu2_f * w_f * pair.head2(q_f) + root.mu1_s * w_s * pair.head1(q_s)

    n = len(profile)
    mults1, mults2, thresholds, revenues, mc1, mc2 = [], [], [], [], [], []
    for j, fmt in enumerate(profile):
        if fmt is Format.FPA:
            mults1.append(root.mu1_f)
            mults2.append(root.mu2_f)
            thresholds.append(q_f)
            revenues.append(weights[j] * per_unit_rev_f)
        else:
            mults1.append(root.mu1_s)
            mults2.append(root.mu2_s)
            thresholds.append(q_s)
            revenues.append(weights[j] * per_unit_rev_s)
        mc1.append(root.mu1_s)  # marginal costs equalized at the SPA level
        mc2.append(root.mu2_s)
    return SubgameSolution(
        mode="per_platform",
        profile=tuple(f.value for f in profile),
        weights=weights,
        multipliers=(tuple(mults1), tuple(mults2)),
        thresholds=tuple(thresholds),
        revenues=tuple(revenues),
        values=(value_1, value_2),
        spends=(spend_1, spend_2),
        marginal_costs=(tuple(mc1), tuple(mc2)),
        residuals={
            "budget_1": spend_1 - value_1,
            "budget_2": spend_2 - value_2,
            "threshold_fpa": abs(
                root.mu1_f * pair.v1.value(q_f) - root.mu2_f * pair.v2.value(q_f)
            ),
            "threshold_spa": abs(
                root.mu1_s * pair.v1.value(q_s) - root.mu2_s * pair.v2.value(q_s)
            ),
            "reaction_1": root.mu1_s / root.mu1_f - bid_reaction(pair, 1, q_f),
            "reaction_2": root.mu2_s / root.mu2_f - bid_reaction(pair, 2, q_f),
        },
        flags=tuple(flags),
    )


def solve_profile(
    pair: AdvertiserPair,
    profile: AuctionProfile,
    weights: Optional[Sequence[float]] = None,
    config: NumericsConfig = DEFAULT_NUMERICS,
) -> SubgameSolution:
    """Equilibrium multipliers, thresholds and revenues for one profile."""
    if len(profile) < 1:
        raise ValueError("profile must name at least one platform")
    w = _normalize_weights(profile, weights)
    degenerate = _one_sided_solution(pair, profile, w)
    if degenerate is not None:
        return degenerate
    formats = set(profile)
    if formats == {Format.FPA}:
        return _solve_all_fpa(pair, profile, w, config)
    if formats == {Format.SPA}:
        return _solve_all_spa(pair, profile, w, config)
    return _solve_mixed(pair, profile, w, config)


def solve_fpa_fpa(pair: AdvertiserPair, config: NumericsConfig = DEFAULT_NUMERICS) -> SubgameSolution:
    """Two symmetric first-price platforms, each holding a full inventory copy."""
    return solve_profile(pair, (Format.FPA, Format.FPA), config=config)


def solve_spa_spa(pair: AdvertiserPair, config: NumericsConfig = DEFAULT_NUMERICS) -> SubgameSolution:
    """Two symmetric second-price platforms, each holding a full inventory copy."""
    return solve_profile(pair, (Format.SPA, Format.SPA), config=config)


def solve_fpa_spa(pair: AdvertiserPair, config: NumericsConfig = DEFAULT_NUMERICS) -> SubgameSolution:
    """First-price platform 1 against second-price platform 2, full copies."""
    return solve_profile(pair, (Format.FPA, Format.SPA), config=config)


# ---------------------------------------------------------------------------
# Existence of an interior equilibrium (escalation guard)


def _safe_cap(pair: AdvertiserPair, advertiser: int) -> float:
    """Largest multiplier that can never violate the advertiser's target.

    For any threshold the opponent's bid might induce, the advertiser's
    spend stays below their value as long as mu is under this cap.
    """
    qs = _interior_scan(pair, 257)
    cap = math.inf
    for q in qs:
        if advertiser == 2:
            v1, v2 = pair.v1.value(q), pair.v2.value(q)
            num, den = v1 * pair.head2(q), v2 * pair.head1(q)
        else:
            v1, v2 = pair.v1.value(q), pair.v2.value(q)
            num, den = v2 * pair.tail1(q), v1 * pair.tail2(q)
        if den > 0.0 and num > 0.0:
            cap = min(cap, num / den)
    return cap


def check_existence_condition(profile: AuctionProfile, pair: AdvertiserPair) -> bool:
    """True when no advertiser can profitably escalate to win everything.

    Vacuously true without second-price platforms (finite bids already
    buy the whole market there, at a cost exceeding its value). With
    second-price platforms, an advertiser whose saturating bid is
    unbounded must find that taking all inventory at the opponent's
    capped bid violates the target.
    """
    if Format.SPA not in profile:
        return True
    lo, hi = pair.domain
    h_bottom = pair.h(lo)
    h_top = pair.h(hi) if hi != math.inf else pair.h(pair.scan_upper())
    total1, total2 = pair.tail1(lo), pair.tail2(lo)
    # advertiser 1 saturates only in the limit when the ratio vanishes at
    # the bottom; advertiser 2 when the ratio explodes at the top
    if h_bottom <= 1e-12:
        cap2 = _safe_cap(pair, 2)
        if math.isfinite(cap2) and total1 >= cap2 * total2:
            return False
    if h_top > 1e12:
        cap1 = _safe_cap(pair, 1)
        if math.isfinite(cap1) and total2 >= cap1 * total1:
            return False
    return True


# ---------------------------------------------------------------------------
# Constrained bidding modes


def _uniform_value_spend(
    pair: AdvertiserPair,
    profile: AuctionProfile,
    weights: Tuple[float, ...],
    advertiser: int,
    mu_own: float,
    mu_opp: float,
    config: NumericsConfig,
) -> Tuple[float, float]:
    """Value and spend across all platforms for one uniform multiplier."""
    lo, hi = pair.domain
    if advertiser == 1:
        mu1, mu2 = mu_own, mu_opp
    else:
        mu1, mu2 = mu_opp, mu_own
    diff = lambda q: mu1 * pair.v1.value(q) - mu2 * pair.v2.value(q)
    top = pair.scan_upper()
    eps = 1e-12
    if diff(lo + eps) >= 0.0:
        q_star = lo
    elif diff(top) <= 0.0:
        q_star = top if hi == math.inf else hi
    else:
        q_star = find_root(diff, lo + eps, top, config)
    value = spend = 0.0
    for w, fmt in zip(weights, profile):
        if advertiser == 1:
            val = w * pair.tail1(q_star)
            pay = mu_own * val if fmt is Format.FPA else w * mu_opp * pair.tail2(q_star)
        else:
            val = w * pair.head2(q_star)
            pay = mu_own * val if fmt is Format.FPA else w * mu_opp * pair.head1(q_star)
        value += val
        spend += pay
    return value, spend


def _uniform_best_response(
    pair: AdvertiserPair,
    profile: AuctionProfile,
    weights: Tuple[float, ...],
    advertiser: int,
    mu_opp: float,
    config: NumericsConfig,
) -> float:
    """Largest feasible uniform multiplier at or above the floor of 1.

    Value is non-decreasing in the own multiplier, so the best response
    saturates the budget; bids below 1 are weakly dominated.
    """
    def slack(mu: float) -> float:
        value, spend = _uniform_value_spend(pair, profile, weights, advertiser, mu, mu_opp, config)
        return spend - value

    if slack(1.0) > 1e-14:
        return 1.0
    hi = 2.0
    while slack(hi) <= 0.0 and hi < 1e6:
        hi *= 2.0
    if hi >= 1e6:
        raise NoConvergence("uniform best response escalates without bound")
    return find_root(slack, 1.0, hi, config)


def solve_uniform_mode(
    pair: AdvertiserPair,
    profile: AuctionProfile,
    weights: Optional[Sequence[float]] = None,
    config: NumericsConfig = DEFAULT_NUMERICS,
    damping: float = 0.5,
    max_iter: int = 200,
) -> SubgameSolution:
    """Equilibrium when each advertiser must use one multiplier everywhere."""
    w = _normalize_weights(profile, weights)
    formats = set(profile)
    if len(formats) == 1:
        # a single format makes the uniform restriction non-binding
        sol = solve_profile(pair, profile, w, config)
        sol.mode = "uniform"
        return sol

    mu1, mu2 = 1.0, 1.0
    for _ in range(max_iter):
        new1 = _uniform_best_response(pair, profile, w, 1, mu2, config)
        mu1_next = math.exp((1 - damping) * math.log(mu1) + damping * math.log(new1))
        new2 = _uniform_best_response(pair, profile, w, 2, mu1_next, config)
        mu2_next = math.exp((1 - damping) * math.log(mu2) + damping * math.log(new2))
        shift = abs(mu1_next - mu1) + abs(mu2_next - mu2)
        mu1, mu2 = mu1_next, mu2_next
        if shift < 1e-12:
            break
    else:
        raise NoConvergence("uniform-mode best responses did not settle")

    lo, hi = pair.domain
    diff = lambda q: mu1 * pair.v1.value(q) - mu2 * pair.v2.value(q)
    top = pair.scan_upper()
    if diff(lo + 1e-12) >= 0.0:
        q_star = lo
    elif diff(top) <= 0.0:
        q_star = top if hi == math.inf else hi
    else:
        q_star = find_root(diff, lo + 1e-12, top, config)

    revenues = []
    for wj, fmt in zip(w, profile):
        if fmt is Format.FPA:
            revenues.append(wj * (mu2 * pair.head2(q_star) + mu1 * pair.tail1(q_star)))
        else:
            revenues.append(wj * (mu1 * pair.head1(q_star) + mu2 * pair.tail2(q_star)))
    value_1, spend_1 = _uniform_value_spend(pair, profile, w, 1, mu1, mu2, config)
    value_2, spend_2 = _uniform_value_spend(pair, profile, w, 2, mu2, mu1, config)
    return SubgameSolution(
        mode="uniform",
        profile=tuple(f.value for f in profile),
        weights=w,
        multipliers=((mu1,) * len(profile), (mu2,) * len(profile)),
        thresholds=(q_star,) * len(profile),
        revenues=tuple(revenues),
        values=(value_1, value_2),
        spends=(spend_1, spend_2),
        marginal_costs=((None,) * len(profile),) * 2,
        residuals={"budget_1": spend_1 - value_1, "budget_2": spend_2 - value_2},
    )


def solve_single_strategic(
    strategic: ValuationSpec,
    static_landscapes: Sequence[ValuationSpec],
    profile: AuctionProfile,
    weights: Optional[Sequence[float]] = None,
    config: NumericsConfig = DEFAULT_NUMERICS,
) -> SubgameSolution:
    """One strategic advertiser against fixed truthful per-query bidders.

    Multipliers equalize marginal cost across platforms at the budget
    level, with the weakly-dominated region below 1 excluded. With every
    platform on first price this lands on a multiplier of exactly 1.
    """
    if len(static_landscapes) != len(profile):
        raise ValueError("one static curve per platform is required")
    w = _normalize_weights(profile, weights)
    views = [
        LandscapeView.from_static_curve(strategic, s, fmt, wj, config)
        for s, fmt, wj in zip(static_landscapes, profile, w)
    ]

    def mu_at_level(level: float, j: int) -> float:
        fmt = profile[j]
        if fmt is Format.SPA:
            return max(1.0, level)
        view = views[j]
        try:
            if marginal_cost(fmt, 1.0, view) >= level:
                return 1.0
        except SaturatedLandscape:
            return 1.0
        hi = 2.0
        cap = min(view.saturation_bid * 0.999999, 1e9)
        while hi < cap:
            try:
                if marginal_cost(fmt, hi, view) >= level:
                    break
            except SaturatedLandscape:
                break
            hi *= 2.0
        hi = min(hi, cap)
        if hi <= 1.0:
            return 1.0

        def gap(mu: float) -> float:
            try:
                return marginal_cost(fmt, mu, view) - level
            except SaturatedLandscape:
                return math.inf

        if gap(hi) < 0.0:
            return hi  # saturated before reaching the level
        return find_root(gap, 1.0, hi, config)

    def budget_slack(level: float) -> float:
        total = 0.0
        for j, view in enumerate(views):
            mu = mu_at_level(level, j)
            total += view.C(mu) - view.V(mu)
        return total

    if budget_slack(1.0) >= -1e-13:
        level = 1.0
    else:
        hi = 2.0
        while budget_slack(hi) < 0.0 and hi < 1e7:
            hi *= 2.0
        if hi >= 1e7:
            level = hi  # wins everything affordable; degenerate cap
        else:
            level = find_root(budget_slack, 1.0, hi, config)

    mus = tuple(mu_at_level(level, j) for j in range(len(profile)))
    flags: Tuple[str, ...] = ()
    if budget_slack(level) < -1e-8:
        flags = ("degenerate_allocation",)

    revenues = []
    value = spend = 0.0
    for j, (view, fmt, wj) in enumerate(zip(views, profile, w)):
        val_j = view.V(mus[j])
        cost_j = view.C(mus[j])
        value += val_j
        spend += cost_j
        static_total = wj * static_landscapes[j].integral(
            strategic.domain[0], 1.0 if strategic.domain[1] == 1.0 else 60.0
        )
        won_static = view.C(mus[j]) if fmt is Format.SPA else None
        if fmt is Format.FPA:
            # winner-pays-bid on won queries, statics pay their own bid elsewhere
            lost_static = static_total - _static_mass_won(view, static_landscapes[j], strategic, mus[j], wj, config)
            revenues.append(cost_j + lost_static)
        else:
            # strategic pays the static bid when winning; statics pay the
            # strategic bid when the strategic loses
            lost_strategic_bid = mus[j] * (wj * _own_total(strategic) - val_j)
            revenues.append(won_static + lost_strategic_bid)
    return SubgameSolution(
        mode="single_strategic",
        profile=tuple(f.value for f in profile),
        weights=w,
        multipliers=(mus,),
        thresholds=(None,) * len(profile),
        revenues=tuple(revenues),
        values=(value,),
        spends=(spend,),
        marginal_costs=(tuple(None for _ in profile),),
        residuals={"budget": spend - value},
        flags=flags,
    )


def _own_total(strategic: ValuationSpec) -> float:
    hi = strategic.domain[1]
    return strategic.integral(strategic.domain[0], hi if hi != math.inf else 60.0)


def _static_mass_won(view, static_curve, strategic, mu, weight, config) -> float:
    # static value mass on queries the strategic advertiser wins
    if view.saturation_bid != math.inf and mu >= view.saturation_bid:
        hi = strategic.domain[1]
        return weight * static_curve.integral(
            strategic.domain[0], hi if hi != math.inf else 60.0
        )
    # rebuild the win set through a throwaway SPA landscape, whose cost is
    # exactly the static mass won
    spa_view = LandscapeView.from_static_curve(strategic, static_curve, Format.SPA, weight, config)
    return spa_view.C(mu)
