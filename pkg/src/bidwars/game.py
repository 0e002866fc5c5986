"""The platforms' format-choice game on top of the bidding subgames.

Payoff matrices come from the general subgame solver. For mirrored pairs
a closed form covers any number of platforms and market-share split: with
total second-price share g, every advertiser bids mu_F = 1/(Q*g + 1 - g)
on first-price platforms and E * mu_F on second-price ones, which makes
dominance depend on the single parameter Q = E * L/H alone.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import IncompleteMatrix, ModeError
from .metrics import q_parameter
from .numerics import DEFAULT_NUMERICS, NumericsConfig
from .subgame import AuctionProfile, Format, SubgameSolution, solve_profile, solve_uniform_mode
from .valuation import AdvertiserPair, bid_reaction, efficient_threshold

__all__ = [
    "MarketShares",
    "PayoffMatrix",
    "EquilibriumReport",
    "build_matrix",
    "find_equilibria",
    "mirrored_profile_solution",
    "market_share_dominance",
]

_DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class MarketShares:
    """Per-platform inventory weights.

    ``scaled``: shares sum to 1 and platform j's queries carry values
    gamma_j * v_i(q). ``full-copy``: every platform owns an unscaled copy
    of the whole inventory (all weights 1).
    """

    gamma: Tuple[float, ...]
    normalization: str = "full-copy"

    def __post_init__(self) -> None:
        if self.normalization not in ("full-copy", "scaled"):
            raise ValueError("normalization must be 'full-copy' or 'scaled'")
        if len(self.gamma) < 1 or any(g <= 0.0 for g in self.gamma):
            raise ValueError("shares must be positive")
        if self.normalization == "scaled":
            if abs(sum(self.gamma) - 1.0) > 1e-9:
                raise ValueError("shares must sum to 1")
        else:
            if any(abs(g - 1.0) > 1e-12 for g in self.gamma):
                raise ValueError("full-copy mode requires all shares equal to 1")

    @property
    def count(self) -> int:
        return len(self.gamma)

    def spa_fraction(self, profile: AuctionProfile) -> float:
        """Fraction of total inventory sold by second price under a profile."""
        total = sum(self.gamma)
        return sum(g for g, f in zip(self.gamma, profile) if f is Format.SPA) / total


@dataclass
class PayoffMatrix:
    """Per-platform revenues for every format profile of a 2-platform game."""

    cells: Dict[Tuple[str, str], Tuple[float, float]]
    errors: Dict[Tuple[str, str], str] = field(default_factory=dict)
    solutions: Dict[Tuple[str, str], SubgameSolution] = field(default_factory=dict)

    def cell(self, f1: str, f2: str) -> Tuple[float, float]:
        key = (f1, f2)
        if key not in self.cells:
            raise IncompleteMatrix(f"cell {key} unsolved: {self.errors.get(key, 'missing')}")
        return self.cells[key]

    @property
    def complete(self) -> bool:
        return len(self.cells) == 4

    def to_dict(self) -> dict:
        return {
            "cells": {f"{a},{b}": list(v) for (a, b), v in sorted(self.cells.items())},
            "errors": {f"{a},{b}": msg for (a, b), msg in sorted(self.errors.items())},
        }

    def to_csv(self) -> str:
        lines = ["format_1,format_2,revenue_1,revenue_2"]
        for (a, b), (r1, r2) in sorted(self.cells.items()):
            lines.append(f"{a},{b},{r1!r},{r2!r}")
        return "\n".join(lines) + "\n"


@dataclass
class EquilibriumReport:
    pure_ne: List[Tuple[str, ...]]
    mixed_ne_2x2: Optional[Tuple[float, float]]
    dominance: str  # SPADominant | FPADominant | Degenerate | None
    classification_basis: str  # PayoffComparison | QTest
    q_param: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "pure_ne": [list(p) for p in self.pure_ne],
            "mixed_ne_2x2": list(self.mixed_ne_2x2) if self.mixed_ne_2x2 else None,
            "dominance": self.dominance,
            "classification_basis": self.classification_basis,
            "q_param": self.q_param,
        }


def build_matrix(
    pair: AdvertiserPair,
    shares: MarketShares,
    mode: str = "per_platform",
    config: NumericsConfig = DEFAULT_NUMERICS,
) -> PayoffMatrix:
    """Solve all four 2-platform subgames; errors stay in their cells."""
    if shares.count != 2:
        raise ValueError("payoff matrices are built for exactly 2 platforms")
    matrix = PayoffMatrix(cells={})
    for f1, f2 in itertools.product((Format.SPA, Format.FPA), repeat=2):
        key = (f1.value, f2.value)
        try:
            if mode == "uniform":
                sol = solve_uniform_mode(pair, (f1, f2), shares.gamma, config)
            else:
                sol = solve_profile(pair, (f1, f2), shares.gamma, config)
            matrix.cells[key] = (sol.revenues[0], sol.revenues[1])
            matrix.solutions[key] = sol
        except Exception as exc:  # recorded per cell, matrix still returned
            matrix.errors[key] = f"{type(exc).__name__}: {exc}"
    if not matrix.cells:
        raise IncompleteMatrix("no subgame could be solved")
    return matrix


def _dominance_from_cells(matrix: PayoffMatrix) -> str:
    ss = matrix.cell("SPA", "SPA")
    sf = matrix.cell("SPA", "FPA")
    fs = matrix.cell("FPA", "SPA")
    ff = matrix.cell("FPA", "FPA")
    spread = max(abs(ss[0] - ff[0]), abs(ss[0] - sf[0]), abs(ss[0] - fs[0]))
    if spread <= _DEGENERACY_TOL and abs(ss[1] - ff[1]) <= _DEGENERACY_TOL:
        return "Degenerate"
    # platform 1's gains from playing SPA against each opponent action
    d_vs_spa = ss[0] - fs[0]
    d_vs_fpa = sf[0] - ff[0]
    if d_vs_spa >= -_DEGENERACY_TOL and d_vs_fpa >= -_DEGENERACY_TOL and max(d_vs_spa, d_vs_fpa) > _DEGENERACY_TOL:
        return "SPADominant"
    if d_vs_spa <= _DEGENERACY_TOL and d_vs_fpa <= _DEGENERACY_TOL and min(d_vs_spa, d_vs_fpa) < -_DEGENERACY_TOL:
        return "FPADominant"
    return "None"


def find_equilibria(matrix: PayoffMatrix, q_param: Optional[float] = None) -> EquilibriumReport:
    """Pure NE by best-response inspection, plus the 2x2 mixed equilibrium
    when both diagonal or both off-diagonal profiles are strict pure NE."""
    if not matrix.complete:
        missing = [k for k in itertools.product(("SPA", "FPA"), repeat=2) if k not in matrix.cells]
        raise IncompleteMatrix(f"unsolved cells: {missing}")
    acts = ("SPA", "FPA")
    pure: List[Tuple[str, ...]] = []
    for a1, a2 in itertools.product(acts, acts):
        r1 = matrix.cell(a1, a2)[0]
        r2 = matrix.cell(a1, a2)[1]
        best1 = all(r1 >= matrix.cell(b, a2)[0] - _DEGENERACY_TOL for b in acts)
        best2 = all(r2 >= matrix.cell(a1, b)[1] - _DEGENERACY_TOL for b in acts)
        if best1 and best2:
            pure.append((a1, a2))

    mixed = None
    strict = lambda a, b: a > b + _DEGENERACY_TOL
    ss, sf = matrix.cell("SPA", "SPA"), matrix.cell("SPA", "FPA")
    fs, ff = matrix.cell("FPA", "SPA"), matrix.cell("FPA", "FPA")
    both_diag = (
        strict(ss[0], fs[0]) and strict(ss[1], sf[1]) and strict(ff[0], sf[0]) and strict(ff[1], fs[1])
    )
    both_off = (
        strict(sf[0], ff[0]) and strict(sf[1], ss[1]) and strict(fs[0], ss[0]) and strict(fs[1], ff[1])
    )
    if both_diag or both_off:
        # p = P(platform 1 plays SPA) making platform 2 indifferent; q likewise
        den2 = ss[1] - sf[1] - fs[1] + ff[1]
        den1 = ss[0] - fs[0] - sf[0] + ff[0]
        if abs(den1) > _DEGENERACY_TOL and abs(den2) > _DEGENERACY_TOL:
            p = (ff[1] - fs[1]) / den2
            q = (ff[0] - sf[0]) / den1
            if -1e-9 <= p <= 1 + 1e-9 and -1e-9 <= q <= 1 + 1e-9:
                mixed = (min(max(p, 0.0), 1.0), min(max(q, 0.0), 1.0))

    return EquilibriumReport(
        pure_ne=pure,
        mixed_ne_2x2=mixed,
        dominance=_dominance_from_cells(matrix),
        classification_basis="PayoffComparison",
        q_param=q_param,
    )


# ---------------------------------------------------------------------------
# Mirrored closed forms, any number of platforms


def mirrored_profile_solution(
    pair: AdvertiserPair,
    shares: MarketShares,
    profile: AuctionProfile,
    config: NumericsConfig = DEFAULT_NUMERICS,
) -> SubgameSolution:
    """Closed-form equilibrium for mirrored pairs under any profile."""
    if not pair.is_mirrored():
        raise ModeError("closed-form profile solution requires a mirrored pair")
    if len(profile) != shares.count:
        raise ValueError("profile length must match the number of platforms")
    q_eff = efficient_threshold(pair, config)
    low = pair.head1(q_eff)
    high = pair.tail1(q_eff)
    e = bid_reaction(pair, 1, q_eff)
    q_param = e * low / high
    g = shares.spa_fraction(profile)
    mu_f = 1.0 / (q_param * g + 1.0 - g)
    mu_s = e * mu_f

    unit = 1.0 if shares.normalization == "scaled" else 2.0
    # scaled mode: platform j revenue = 2 * gamma_j * mu * mass;
    # full-copy mode: each platform holds a whole copy, so twice that of a
    # half-share platform
    mults, thresholds, revenues, mc = [], [], [], []
    for gamma_j, fmt in zip(shares.gamma, profile):
        scale = 2.0 * gamma_j if shares.normalization == "scaled" else unit
        if fmt is Format.SPA:
            mults.append(mu_s)
            revenues.append(scale * mu_s * low)
        else:
            mults.append(mu_f)
            revenues.append(scale * mu_f * high)
        thresholds.append(q_eff)
        mc.append(mu_s)
    total_w = sum(shares.gamma) if shares.normalization == "scaled" else float(shares.count)
    value = total_w * high
    return SubgameSolution(
        mode="per_platform",
        profile=tuple(f.value for f in profile),
        weights=tuple(shares.gamma),
        multipliers=(tuple(mults), tuple(mults)),
        thresholds=tuple(thresholds),
        revenues=tuple(revenues),
        values=(value, value),
        spends=(value, value),
        marginal_costs=(tuple(mc), tuple(mc)),
        residuals={"budget_1": 0.0, "budget_2": 0.0},
    )


def _deviation_violations(
    pair: AdvertiserPair,
    shares: MarketShares,
    better: str,
    config: NumericsConfig,
) -> List[tuple]:
    """Profiles and platforms where `better` is not weakly revenue-better."""
    n = shares.count
    if n > 12:
        raise ValueError("exhaustive profile enumeration capped at 12 platforms")
    out = []
    for bits in itertools.product((Format.SPA, Format.FPA), repeat=n):
        sol = mirrored_profile_solution(pair, shares, bits, config)
        for j in range(n):
            flipped = list(bits)
            flipped[j] = Format.FPA if bits[j] is Format.SPA else Format.SPA
            alt = mirrored_profile_solution(pair, shares, tuple(flipped), config)
            rev_spa = sol.revenues[j] if bits[j] is Format.SPA else alt.revenues[j]
            rev_fpa = alt.revenues[j] if bits[j] is Format.SPA else sol.revenues[j]
            gap = rev_spa - rev_fpa if better == "SPA" else rev_fpa - rev_spa
            if gap < -_DEGENERACY_TOL:
                out.append((tuple(f.value for f in bits), j, gap))
    return out


def market_share_dominance(
    pair: AdvertiserPair,
    shares: MarketShares,
    config: NumericsConfig = DEFAULT_NUMERICS,
    verify: bool = True,
) -> EquilibriumReport:
    """Classify the n-platform game for a mirrored pair by its Q parameter.

    Optionally cross-checks the classification with exhaustive one-platform
    deviation comparisons over all 2^n profiles (n <= 6).
    """
    q_param = q_parameter(pair, config)
    if abs(q_param - 1.0) <= _DEGENERACY_TOL:
        dominance = "Degenerate"
    elif q_param > 1.0:
        dominance = "SPADominant"
    else:
        dominance = "FPADominant"
    if verify and dominance != "Degenerate" and shares.count <= 6:
        better = "SPA" if dominance == "SPADominant" else "FPA"
        violations = _deviation_violations(pair, shares, better, config)
        if violations:
            raise AssertionError(
                f"deviation check contradicts the Q-test: {violations[:3]}"
            )
    pure = None
    if dominance == "SPADominant":
        pure = [tuple("SPA" for _ in range(shares.count))]
    elif dominance == "FPADominant":
        pure = [tuple("FPA" for _ in range(shares.count))]
    else:
        pure = []
    return EquilibriumReport(
        pure_ne=pure,
        mixed_ne_2x2=None,
        dominance=dominance,
        classification_basis="QTest",
        q_param=q_param,
    )
