import itertools

import pytest

from bidwars.errors import ModeError
from bidwars.game import (
    EquilibriumReport,
    MarketShares,
    build_matrix,
    find_equilibria,
    market_share_dominance,
    mirrored_profile_solution,
)
from bidwars.metrics import q_parameter
from bidwars.subgame import Format, solve_profile
from bidwars.valuation import (
    AdvertiserPair,
    Affine,
    Constant,
    ExponentialGrowth,
    Monomial,
    ValuationSpec,
    mirrored_pair,
)

MIRROR = mirrored_pair(Monomial(1.0))
FULL2 = MarketShares((1.0, 1.0), "full-copy")


def lincon(alpha):
    return AdvertiserPair(v1=Affine(alpha, 0.0), v2=Constant(1.0))


def test_shares_validation():
    MarketShares((0.5, 0.5), "scaled")
    with pytest.raises(ValueError):
        MarketShares((0.5, 0.6), "scaled")
    with pytest.raises(ValueError):
        MarketShares((0.5, 0.5), "full-copy")
    with pytest.raises(ValueError):
        MarketShares((1.0, 1.0), "other")


def test_matrix_mirrored_linear_full_copy():
    m = build_matrix(MIRROR, FULL2)
    assert m.cell("SPA", "SPA") == pytest.approx((0.75, 0.75), abs=1e-9)
    assert m.cell("FPA", "FPA") == pytest.approx((0.75, 0.75), abs=1e-9)
    assert m.cell("SPA", "FPA") == pytest.approx((6 / 7, 9 / 14), abs=1e-9)
    assert m.cell("FPA", "SPA") == pytest.approx((9 / 14, 6 / 7), abs=1e-9)


def test_matrix_symmetry_under_profile_swap():
    for pair in (MIRROR, lincon(3.0)):
        m = build_matrix(pair, FULL2)
        for a, b in itertools.product(("SPA", "FPA"), repeat=2):
            r = m.cell(a, b)
            s = m.cell(b, a)
            assert r[0] == pytest.approx(s[1], abs=1e-9)
            assert r[1] == pytest.approx(s[0], abs=1e-9)


def test_matrix_lincon_cells():
    alpha = 3.0
    m = build_matrix(lincon(alpha), FULL2)
    assert m.cell("SPA", "SPA")[0] == pytest.approx(3 - 4 / alpha, abs=1e-9)
    assert m.cell("FPA", "FPA")[0] == pytest.approx((alpha**2 + 1) / (2 * alpha), abs=1e-9)
    sol = solve_profile(lincon(alpha), (Format.SPA, Format.FPA))
    q_f = sol.thresholds[1]
    q_s = sol.thresholds[0]
    assert m.cell("SPA", "FPA") == pytest.approx((2 - q_s, (1 + q_f**2) / (2 * q_f)), abs=1e-9)


def test_matrix_records_cell_errors():
    m = build_matrix(lincon(4.5), FULL2)  # no second-price equilibrium here
    assert ("SPA", "SPA") in m.errors
    assert ("FPA", "FPA") in m.cells


def test_find_equilibria_mirrored_linear():
    rep = find_equilibria(build_matrix(MIRROR, FULL2))
    assert rep.pure_ne == [("SPA", "SPA")]
    assert rep.dominance == "SPADominant"
    assert rep.mixed_ne_2x2 is None


def test_find_equilibria_lincon_bands():
    rep = find_equilibria(build_matrix(lincon(3.0), FULL2))
    assert rep.pure_ne == [("SPA", "SPA")]

    rep = find_equilibria(build_matrix(lincon(3.55), FULL2))
    assert ("SPA", "SPA") in rep.pure_ne and ("FPA", "FPA") in rep.pure_ne
    assert rep.mixed_ne_2x2 is not None

    rep = find_equilibria(build_matrix(lincon(3.9), FULL2))
    assert rep.pure_ne == [("FPA", "FPA")]

    rep = find_equilibria(build_matrix(lincon(2.1), FULL2))
    assert ("SPA", "FPA") in rep.pure_ne and ("FPA", "SPA") in rep.pure_ne
    assert rep.mixed_ne_2x2 is not None


def test_find_equilibria_degenerate():
    from bidwars.game import PayoffMatrix

    cells = {(a, b): (1.0, 1.0) for a in ("SPA", "FPA") for b in ("SPA", "FPA")}
    rep = find_equilibria(PayoffMatrix(cells=cells))
    assert rep.dominance == "Degenerate"
    assert len(rep.pure_ne) == 4


def test_mirrored_profile_solution_full_copy():
    sol = mirrored_profile_solution(MIRROR, FULL2, (Format.SPA, Format.FPA))
    assert sol.multipliers[0][1] == pytest.approx(6 / 7, abs=1e-9)
    assert sol.multipliers[0][0] == pytest.approx(24 / 7, abs=1e-9)
    assert sol.revenues == pytest.approx((6 / 7, 9 / 14), abs=1e-9)


def test_mirrored_profile_solution_matches_general_solver():
    for spec in (Monomial(1.0), Monomial(2.0), ExponentialGrowth(1.0)):
        pair = mirrored_pair(spec)
        for profile in itertools.product((Format.SPA, Format.FPA), repeat=2):
            closed = mirrored_profile_solution(pair, FULL2, profile)
            general = solve_profile(pair, profile)
            for j in range(2):
                assert closed.revenues[j] == pytest.approx(general.revenues[j], abs=1e-8)
                assert closed.multipliers[0][j] == pytest.approx(
                    general.multipliers[0][j], abs=1e-8
                )


def test_mirrored_profile_all_spa_multiplier_is_high_over_low():
    pair = mirrored_pair(Monomial(2.0))
    shares = MarketShares((0.3, 0.7), "scaled")
    sol = mirrored_profile_solution(pair, shares, (Format.SPA, Format.SPA))
    low = pair.head1(0.5)
    high = pair.tail1(0.5)
    assert sol.multipliers[0][0] == pytest.approx(high / low, rel=1e-9)
    # all-FPA: multiplier 1, platform j earns 2 gamma_j H
    sol = mirrored_profile_solution(pair, shares, (Format.FPA, Format.FPA))
    assert sol.multipliers[0][0] == 1.0
    assert sol.revenues[1] == pytest.approx(2 * 0.7 * high, rel=1e-9)


def test_mirrored_profile_requires_mirrored_pair():
    with pytest.raises(ModeError):
        mirrored_profile_solution(lincon(3.0), FULL2, (Format.SPA, Format.FPA))


def test_market_share_dominance_examples():
    for gammas in ((0.5, 0.5), (0.7, 0.3), (0.2, 0.3, 0.5), (0.1, 0.2, 0.3, 0.4)):
        shares = MarketShares(gammas, "scaled")
        rep = market_share_dominance(MIRROR, shares)
        assert rep.dominance == "SPADominant"
        assert rep.classification_basis == "QTest"
        assert rep.q_param == pytest.approx(4 / 3, abs=1e-9)


class _PlateauRise(ValuationSpec):
    """Flat shelf then a late surge: tiny overlap between mirrored copies."""

    def __init__(self, base, gain, pivot):
        self.base, self.gain, self.pivot = base, gain, pivot
        self.domain = (0.0, 1.0)

    def _value(self, q):
        import math

        return self.base + math.exp(self.gain * (q - self.pivot))

    def _slope(self, q):
        import math

        return self.gain * math.exp(self.gain * (q - self.pivot))

    def _integral(self, a, b):
        import math

        return self.base * (b - a) + (
            math.exp(self.gain * (b - self.pivot)) - math.exp(self.gain * (a - self.pivot))
        ) / self.gain


def test_market_share_dominance_fpa_side():
    # nearly disjoint mirrored curves: weak competition and weak bidding
    # reaction at the crossing, so first price wins everywhere
    flat = mirrored_pair(_PlateauRise(0.5, 20.0, 0.8))
    assert q_parameter(flat) < 1.0
    rep = market_share_dominance(flat, MarketShares((0.6, 0.4), "scaled"))
    assert rep.dominance == "FPADominant"
    assert rep.pure_ne == [("FPA", "FPA")]


def test_dominance_classification_is_share_independent():
    results = set()
    for gammas in ((0.5, 0.5), (0.9, 0.1), (0.25, 0.35, 0.4)):
        rep = market_share_dominance(MIRROR, MarketShares(gammas, "scaled"))
        results.add(rep.dominance)
    assert results == {"SPADominant"}


def test_q_test_matches_payoff_comparison_for_two_platforms():
    for spec in (Monomial(1.0), Monomial(3.0), ExponentialGrowth(0.5), Affine(0.5, 0.25)):
        pair = mirrored_pair(spec)
        q = q_parameter(pair)
        rep = find_equilibria(build_matrix(pair, FULL2))
        expected = "SPADominant" if q > 1 + 1e-9 else ("FPADominant" if q < 1 - 1e-9 else "Degenerate")
        assert rep.dominance == expected
