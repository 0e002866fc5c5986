"""Discretized brute-force verifier for the two-advertiser subgames.

Queries and multipliers are put on grids; damped alternating best
responses run until the multipliers stop moving, then the search zooms
into progressively finer local multiplier grids. Nothing here touches
the analytic solvers: the comparison between the two is the check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import OracleNoConvergence
from .subgame import AuctionProfile, Format, SubgameSolution
from .valuation import AdvertiserPair

__all__ = ["OracleConfig", "OracleSolution", "best_response", "equilibrium_by_dynamics", "compare"]


@dataclass(frozen=True)
class OracleConfig:
    n_queries: int = 2000
    mult_lo: float = 1e-3
    mult_hi: float = 50.0
    mult_points: int = 400
    damping: float = 0.5
    max_rounds: int = 500
    convergence_tol: float = 1e-4
    zoom_stages: int = 2
    zoom_points: int = 160

    def __post_init__(self) -> None:
        if self.n_queries < 100:
            raise ValueError("need at least 100 query samples")
        if not (self.mult_lo <= 0.5 and self.mult_hi >= 10.0):
            raise ValueError("multiplier grid must cover [0.5, 10]")
        if not 0.0 < self.damping <= 1.0:
            raise ValueError("damping must lie in (0, 1]")

    def multiplier_grid(self) -> np.ndarray:
        return np.geomspace(self.mult_lo, self.mult_hi, self.mult_points)


@dataclass
class OracleSolution:
    profile: Tuple[str, ...]
    multipliers: Tuple[Tuple[float, ...], Tuple[float, ...]]
    thresholds: Tuple[Optional[float], ...]
    revenues: Tuple[float, ...]
    values: Tuple[float, float]
    spends: Tuple[float, float]
    rounds: int
    converged: bool

    def to_dict(self) -> dict:
        return {
            "profile": list(self.profile),
            "multipliers": [list(r) for r in self.multipliers],
            "thresholds": list(self.thresholds),
            "revenues": list(self.revenues),
            "values": list(self.values),
            "spends": list(self.spends),
            "rounds": self.rounds,
            "converged": self.converged,
        }


class _Discretization:
    """Midpoint query grid with both advertisers' values precomputed.

    Finite domains use a uniform grid. Half-line domains place cells
    uniformly in exp(-q) so the resolution follows the value mass instead
    of thinning out over the long tail.
    """

    def __init__(self, pair: AdvertiserPair, weights: Sequence[float], config: OracleConfig):
        self.pair = pair
        self.weights = tuple(weights)
        n = config.n_queries
        if pair.domain[1] == math.inf:
            # cut where the remaining mass is negligible; a tight cutoff
            # keeps the uniform cells dense where the curves still matter,
            # and the long window gets proportionally more cells
            lo = pair.domain[0]
            total = pair.tail1(lo) + pair.tail2(lo)
            upper = 1.0
            while pair.tail1(upper) + pair.tail2(upper) > 1e-7 * total and upper < 700.0:
                upper *= 1.25
            n *= 4
        else:
            upper = pair.domain[1]
        edges = np.linspace(0.0, upper, n + 1)
        self.edges = edges
        self.dq = np.diff(edges)
        q = 0.5 * (edges[:-1] + edges[1:])
        self.queries = q
        self.v1 = np.array([pair.v1.value(x) for x in q])
        self.v2 = np.array([pair.v2.value(x) for x in q])
        self.mass1 = self.v1 * self.dq
        self.mass2 = self.v2 * self.dq

    def platform_tables(
        self, fmt: Format, advertiser: int, mu_opp: float, grid: np.ndarray, weight: float
    ) -> Tuple[np.ndarray, np.ndarray]:
        """Value and spend per grid multiplier on one platform."""
        own = self.v1 if advertiser == 1 else self.v2
        opp = self.v2 if advertiser == 1 else self.v1
        own_mass = self.mass1 if advertiser == 1 else self.mass2
        opp_mass = self.mass2 if advertiser == 1 else self.mass1
        # ties go to advertiser 1
        if advertiser == 1:
            wins = grid[:, None] * own[None, :] >= mu_opp * opp[None, :]
        else:
            wins = grid[:, None] * own[None, :] > mu_opp * opp[None, :]
        value = weight * (wins * own_mass[None, :]).sum(axis=1)
        if fmt is Format.FPA:
            spend = grid * value
        else:
            spend = weight * mu_opp * (wins * opp_mass[None, :]).sum(axis=1)
        return value, spend


def _format_groups(profile: AuctionProfile) -> List[List[int]]:
    """Platforms sharing one auction format share one multiplier (the
    symmetric-platform refinement), so the search runs per format group."""
    groups: Dict[Format, List[int]] = {}
    for j, fmt in enumerate(profile):
        groups.setdefault(fmt, []).append(j)
    return [groups[f] for f in (Format.FPA, Format.SPA) if f in groups]


def best_response(
    pair: AdvertiserPair,
    profile: AuctionProfile,
    opponent_multipliers: Sequence[float],
    advertiser: int,
    config: OracleConfig = OracleConfig(),
    weights: Optional[Sequence[float]] = None,
    grids: Optional[List[np.ndarray]] = None,
    disc: Optional[_Discretization] = None,
) -> Tuple[float, ...]:
    """Grid point(s) maximizing discretized value under the spend cap.

    One multiplier per format group; ties break toward the largest
    multipliers, which prunes weakly dominated low bids.
    """
    if len(profile) != 2:
        raise ValueError("the oracle handles exactly two platforms")
    w = tuple(weights) if weights is not None else (1.0,) * len(profile)
    if disc is None:
        disc = _Discretization(pair, w, config)
    groups = _format_groups(profile)
    if grids is None:
        grids = [config.multiplier_grid() for _ in groups]
    tables = []
    for grid, members in zip(grids, groups):
        value = np.zeros(len(grid))
        spend = np.zeros(len(grid))
        for j in members:
            v, s = disc.platform_tables(
                profile[j], advertiser, opponent_multipliers[j], grid, w[j]
            )
            value += v
            spend += s
        tables.append((grid, value, spend))
    if len(tables) == 1:
        grid, value, spend = tables[0]
        score = np.where(spend <= value + 1e-12, value, -1.0)
        i = int(np.flatnonzero(score >= score.max() - 1e-15)[-1])
        chosen = {0: float(grid[i])}
    else:
        (ga, va, sa), (gb, vb, sb) = tables
        total = va[:, None] + vb[None, :]
        feasible = sa[:, None] + sb[None, :] <= total + 1e-12
        score = np.where(feasible, total, -1.0)
        mask = score >= score.max() - 1e-15
        i, j = max(np.argwhere(mask).tolist())
        chosen = {0: float(ga[i]), 1: float(gb[j])}
    out = [0.0] * len(profile)
    for gi, members in enumerate(groups):
        for j in members:
            out[j] = chosen[gi]
    return tuple(out)


def _local_grid(center: float, factor: float, points: int) -> np.ndarray:
    return np.geomspace(center / factor, center * factor, points)


class _SmoothMarket:
    """Interpolated view of the discretized curves.

    Cumulative value sums at cell edges turn the sampled curves into
    piecewise-linear masses, so win thresholds and won value vary
    continuously with the multipliers. This removes the grid-quantization
    plateau that makes the raw cell-counting argmax wander along the
    budget ridge.
    """

    def __init__(self, disc: _Discretization):
        self.disc = disc
        self.edges = list(disc.edges)
        self.cum1 = [0.0] + list(np.cumsum(disc.mass1))
        self.cum2 = [0.0] + list(np.cumsum(disc.mass2))
        with np.errstate(divide="ignore"):
            logratio = np.log(disc.v1) - np.log(disc.v2)
        # enforce monotonicity against floating noise for interpolation
        self.logratio = list(np.maximum.accumulate(logratio))
        self.qs = list(disc.queries)

    def threshold(self, mu1: float, mu2: float) -> float:
        """Continuous crossing of the two bid curves."""
        from bisect import bisect_left

        x = math.log(mu2) - math.log(mu1)
        lr = self.logratio
        if x <= lr[0]:
            return 0.0
        if x >= lr[-1]:
            return self.edges[-1]
        i = bisect_left(lr, x)
        x0, x1 = lr[i - 1], lr[i]
        q0, q1 = self.qs[i - 1], self.qs[i]
        if x1 == x0:
            return q1
        return q0 + (x - x0) / (x1 - x0) * (q1 - q0)

    def _cum_at(self, cum: list, q: float) -> float:
        from bisect import bisect_left

        edges = self.edges
        if q <= 0.0:
            return 0.0
        if q >= edges[-1]:
            return cum[-1]
        i = bisect_left(edges, q)
        e0, e1 = edges[i - 1], edges[i]
        c0, c1 = cum[i - 1], cum[i]
        return c0 + (q - e0) / (e1 - e0) * (c1 - c0)

    def head(self, advertiser: int, q: float) -> float:
        cum = self.cum1 if advertiser == 1 else self.cum2
        return self._cum_at(cum, q)

    def tail(self, advertiser: int, q: float) -> float:
        cum = self.cum1 if advertiser == 1 else self.cum2
        return cum[-1] - self._cum_at(cum, q)

    def value_and_spend(
        self,
        profile: AuctionProfile,
        w: Tuple[float, ...],
        mu1: Sequence[float],
        mu2: Sequence[float],
        advertiser: int,
    ) -> Tuple[float, float]:
        value = spend = 0.0
        for j, fmt in enumerate(profile):
            q = self.threshold(mu1[j], mu2[j])
            if advertiser == 1:
                val = w[j] * self.tail(1, q)
                own = mu1[j]
                opp_mass = w[j] * self.tail(2, q)
                opp_mu = mu2[j]
            else:
                val = w[j] * self.head(2, q)
                own = mu2[j]
                opp_mass = w[j] * self.head(1, q)
                opp_mu = mu1[j]
            value += val
            spend += own * val if fmt is Format.FPA else opp_mu * opp_mass
        return value, spend


def _smooth_best_response(
    market: _SmoothMarket,
    profile: AuctionProfile,
    w: Tuple[float, ...],
    groups: List[List[int]],
    opp: np.ndarray,
    advertiser: int,
    current: np.ndarray,
    window: float = 0.25,
) -> np.ndarray:
    """Continuous best response on the interpolated curves.

    One multiplier per format group; a golden-section search over the
    cross-group ratio with the overall scale always pushed to the budget
    boundary (value never falls in the own multiplier).
    """

    def assemble(scale: float, ratio: float) -> np.ndarray:
        out = np.empty(len(profile))
        for gi, members in enumerate(groups):
            level = scale * (ratio if gi == 1 else 1.0)
            for j in members:
                out[j] = level
        return out

    def packed(mu_own: np.ndarray) -> Tuple[float, float]:
        if advertiser == 1:
            return market.value_and_spend(profile, w, mu_own, opp, 1)
        return market.value_and_spend(profile, w, opp, mu_own, 2)

    warm = {"scale": None}

    def budget_tight_scale(ratio: float, hint: float) -> float:
        """Largest scale keeping spend <= value; 1e4 signals escalation.

        The slack sits at exactly zero while the advertiser wins nothing,
        so the search climbs until the budget binds and then bisects the
        feasibility boundary from below.
        """

        def slack(s: float) -> float:
            value, spend = packed(assemble(s, ratio))
            return spend - value

        start = warm["scale"] or hint
        lo, hi = start * 0.999, start * 1.001
        if slack(lo) > 0.0:
            hi = lo
            for _ in range(120):
                lo *= 0.75
                if slack(lo) <= 0.0 or lo < 1e-9:
                    break
        elif slack(hi) <= 0.0:
            lo = hi
            for _ in range(120):
                hi *= 1.3
                if slack(hi) > 0.0:
                    break
                lo = hi
                if hi > 1e4:
                    warm["scale"] = None
                    return 1e4
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if slack(mid) <= 0.0:
                lo = mid
            else:
                hi = mid
        warm["scale"] = lo
        return lo

    base_scale = current[groups[0][0]]
    if len(groups) == 1:
        return assemble(budget_tight_scale(1.0, base_scale), 1.0)

    ratio0 = current[groups[1][0]] / current[groups[0][0]]

    def objective(log_ratio: float) -> float:
        ratio = math.exp(log_ratio)
        s = budget_tight_scale(ratio, base_scale)
        value, _ = packed(assemble(s, ratio))
        return value

    lo, hi = math.log(ratio0) - window, math.log(ratio0) + window
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - phi * (b - a), a + phi * (b - a)
    fc, fd = objective(c), objective(d)
    while b - a > 1e-8:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = objective(d)
    ratio = math.exp(0.5 * (a + b))
    return assemble(budget_tight_scale(ratio, base_scale), ratio)


def _scale_tighten(
    market: _SmoothMarket,
    profile: AuctionProfile,
    w: Tuple[float, ...],
    mu1: np.ndarray,
    mu2: np.ndarray,
    advertiser: int,
) -> np.ndarray:
    """Largest common rescale of one advertiser keeping spend <= value."""

    def slack(c: float) -> float:
        a = mu1 * c if advertiser == 1 else mu1
        b = mu2 * c if advertiser == 2 else mu2
        value, spend = market.value_and_spend(profile, w, a, b, advertiser)
        return spend - value

    lo, hi = 1.0, 1.0
    for _ in range(80):
        if slack(lo) <= 0.0:
            break
        lo *= 0.95
    for _ in range(80):
        if slack(hi) > 0.0:
            break
        hi *= 1.05
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if slack(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    return (mu1 if advertiser == 1 else mu2) * lo


def _continuous_polish(
    disc: _Discretization,
    profile: AuctionProfile,
    w: Tuple[float, ...],
    mu1: np.ndarray,
    mu2: np.ndarray,
    rounds: int = 140,
    tol: float = 2e-6,
    damping: float = 0.25,
) -> Tuple[np.ndarray, np.ndarray, _SmoothMarket, bool]:
    market = _SmoothMarket(disc)
    groups = _format_groups(profile)
    settled = False
    window = 0.3
    shift = math.inf
    for _ in range(rounds):
        new1 = _smooth_best_response(market, profile, w, groups, mu2, 1, mu1, window)
        new2 = _smooth_best_response(market, profile, w, groups, mu1, 2, mu2, window)
        shift = float(np.max(np.abs(np.log(new1 / mu1)))) + float(
            np.max(np.abs(np.log(new2 / mu2)))
        )
        mu1 = (1.0 - damping) * mu1 + damping * new1
        mu2 = (1.0 - damping) * mu2 + damping * new2
        window = max(0.015, min(window, 6.0 * shift))
        if shift < tol:
            settled = True
            break
    settled = settled or shift < 3e-5
    # land exactly on the feasible side of both budget boundaries
    for _ in range(4):
        mu1 = _scale_tighten(market, profile, w, mu1, mu2, 1)
        mu2 = _scale_tighten(market, profile, w, mu1, mu2, 2)
    return mu1, mu2, market, settled


def _clipped_grid(center: float, factor: float, config: OracleConfig) -> np.ndarray:
    lo = max(center / factor, config.mult_lo)
    hi = min(center * factor, config.mult_hi)
    if hi <= lo:
        lo, hi = config.mult_lo, config.mult_hi
    return np.geomspace(lo, hi, config.zoom_points)


def equilibrium_by_dynamics(
    pair: AdvertiserPair,
    profile: AuctionProfile,
    config: OracleConfig = OracleConfig(),
    weights: Optional[Sequence[float]] = None,
) -> OracleSolution:
    """Damped alternating best responses, then local grid refinement.

    On a coarse grid the exact equilibrium usually sits between grid
    points, so best responses settle into a small cycle around it; each
    stage therefore either converges or averages its recent iterates and
    zooms a finer grid around that center. Only a stall on the finest
    grid counts as non-convergence.
    """
    if len(profile) != 2:
        raise ValueError("the oracle handles exactly two platforms")
    w = tuple(weights) if weights is not None else (1.0,) * len(profile)
    disc = _Discretization(pair, w, config)
    groups = _format_groups(profile)
    coarse = config.multiplier_grid()
    mu1 = np.array([1.0, 1.0])
    mu2 = np.array([1.0, 1.0])
    rounds = 0
    converged = False

    def damp(old: np.ndarray, new: Tuple[float, ...]) -> np.ndarray:
        return np.exp(
            (1 - config.damping) * np.log(old) + config.damping * np.log(np.array(new))
        )

    grids1 = [coarse for _ in groups]
    grids2 = [coarse for _ in groups]
    coarse_step = math.log(coarse[1] / coarse[0])
    step = coarse_step
    history: List[Tuple[np.ndarray, np.ndarray]] = []

    def smooth_tail() -> Tuple[np.ndarray, np.ndarray]:
        tail = history[-8:]
        a = np.exp(np.mean([np.log(x) for x, _ in tail], axis=0))
        b = np.exp(np.mean([np.log(y) for _, y in tail], axis=0))
        return a, b

    def tail_spread() -> float:
        tail = history[-8:]
        logs = np.array([np.concatenate([np.log(x), np.log(y)]) for x, y in tail])
        return float(np.max(logs.max(axis=0) - logs.min(axis=0)))

    for stage in range(config.zoom_stages + 1):
        converged = False
        stage_tol = max(config.convergence_tol, 0.5 * step)
        budget = config.max_rounds if stage == 0 else min(config.max_rounds, 30)
        history.clear()
        for _ in range(budget):
            rounds += 1
            br1 = best_response(pair, profile, mu2, 1, config, w, grids1, disc)
            mu1_next = damp(mu1, br1)
            br2 = best_response(pair, profile, mu1_next, 2, config, w, grids2, disc)
            mu2_next = damp(mu2, br2)
            shift = max(
                float(np.max(np.abs(np.log(mu1_next / mu1)))),
                float(np.max(np.abs(np.log(mu2_next / mu2)))),
            )
            mu1, mu2 = mu1_next, mu2_next
            history.append((mu1.copy(), mu2.copy()))
            if shift < stage_tol:
                converged = True
                break
        # off-grid equilibria leave a tight best-response cycle instead of a
        # fixed point; accept a modest cluster and let later stages refine
        if not converged and len(history) >= 8:
            mu1, mu2 = smooth_tail()
        top = config.mult_hi * math.exp(-4.0 * coarse_step)
        if float(np.max(mu1)) >= top or float(np.max(mu2)) >= top:
            break  # escalation suspected; the continuous phase arbitrates
        if stage >= config.zoom_stages:
            break
        factor = math.exp(4.0 * step)
        grids1 = [_clipped_grid(mu1[g[0]], factor, config) for g in groups]
        grids2 = [_clipped_grid(mu2[g[0]], factor, config) for g in groups]
        step = math.log(grids1[0][1] / grids1[0][0])
    mu1, mu2, market, settled = _continuous_polish(disc, profile, w, mu1, mu2)
    converged = settled
    ceiling = 1e3 * max(1.0, config.mult_hi / 50.0)
    if float(np.max(mu1)) >= ceiling or float(np.max(mu2)) >= ceiling:
        raise OracleNoConvergence("a multiplier escalated without bound")
    if not settled:
        raise OracleNoConvergence(
            f"best responses still moving after {rounds} grid rounds"
        )

    thresholds: List[Optional[float]] = []
    revenues: List[float] = []
    for j, fmt in enumerate(profile):
        q = market.threshold(mu1[j], mu2[j])
        thresholds.append(q)
        if fmt is Format.FPA:
            rev = mu2[j] * market.head(2, q) + mu1[j] * market.tail(1, q)
        else:
            rev = mu1[j] * market.head(1, q) + mu2[j] * market.tail(2, q)
        revenues.append(w[j] * rev)
    value1, spend1 = market.value_and_spend(profile, w, mu1, mu2, 1)
    value2, spend2 = market.value_and_spend(profile, w, mu1, mu2, 2)
    return OracleSolution(
        profile=tuple(f.value for f in profile),
        multipliers=(tuple(float(m) for m in mu1), tuple(float(m) for m in mu2)),
        thresholds=tuple(thresholds),
        revenues=tuple(revenues),
        values=(value1, value2),
        spends=(spend1, spend2),
        rounds=rounds,
        converged=converged,
    )


def compare(
    analytic: SubgameSolution,
    oracle: OracleSolution,
    config: OracleConfig = OracleConfig(),
) -> Dict[str, object]:
    """Per-quantity deltas between analytic and brute-force solutions."""
    threshold_tol = 2.0 / config.n_queries
    rev_tol = 0.01
    deltas = {}
    ok = True
    for j, (qa, qo) in enumerate(zip(analytic.thresholds, oracle.thresholds)):
        if qa is None or qo is None:
            continue
        d = abs(qa - qo)
        deltas[f"threshold_{j}"] = d
        ok &= d <= threshold_tol
    for j, (ra, ro) in enumerate(zip(analytic.revenues, oracle.revenues)):
        d = abs(ra - ro) / max(abs(ra), 1e-12)
        deltas[f"revenue_rel_{j}"] = d
        ok &= d <= rev_tol
    return {"deltas": deltas, "passed": bool(ok), "threshold_tol": threshold_tol, "revenue_rel_tol": rev_tol}
