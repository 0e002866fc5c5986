import pytest

from bidwars.errors import OracleNoConvergence
from bidwars.oracle import OracleConfig, best_response, compare, equilibrium_by_dynamics
from bidwars.subgame import Format, solve_profile
from bidwars.valuation import AdvertiserPair, Affine, Constant, Monomial, mirrored_pair

MIRROR = mirrored_pair(Monomial(1.0))
FAST = OracleConfig(n_queries=1500, mult_points=240, zoom_stages=2, zoom_points=120)


def test_config_validation():
    with pytest.raises(ValueError):
        OracleConfig(n_queries=50)
    with pytest.raises(ValueError):
        OracleConfig(mult_hi=5.0)
    with pytest.raises(ValueError):
        OracleConfig(damping=0.0)


def test_best_response_all_fpa_is_truthful():
    br = best_response(MIRROR, (Format.FPA, Format.FPA), (1.0, 1.0), 1, FAST)
    for mu in br:
        assert mu == pytest.approx(1.0, rel=0.03)


def test_best_response_all_spa_matches_budget_bid():
    import math

    br = best_response(MIRROR, (Format.SPA, Format.SPA), (3.0, 3.0), 1, FAST)
    grid_step = math.log(FAST.mult_hi / FAST.mult_lo) / (FAST.mult_points - 1)
    for mu in br:
        assert abs(math.log(mu / 3.0)) <= 2.1 * grid_step


def test_dynamics_match_analytic_mirrored():
    for profile in (
        (Format.FPA, Format.FPA),
        (Format.SPA, Format.SPA),
        (Format.FPA, Format.SPA),
    ):
        analytic = solve_profile(MIRROR, profile)
        oracle = equilibrium_by_dynamics(MIRROR, profile, FAST)
        report = compare(analytic, oracle, FAST)
        assert report["passed"], report


def test_dynamics_mixed_ratio_matches_reaction():
    oracle = equilibrium_by_dynamics(MIRROR, (Format.FPA, Format.SPA), FAST)
    ratio = oracle.multipliers[0][1] / oracle.multipliers[0][0]
    assert ratio == pytest.approx(4.0, rel=0.02)


def test_dynamics_lincon_spa_spa():
    pair = AdvertiserPair(v1=Affine(3.0, 0.0), v2=Constant(1.0))
    analytic = solve_profile(pair, (Format.SPA, Format.SPA))
    oracle = equilibrium_by_dynamics(pair, (Format.SPA, Format.SPA), FAST)
    report = compare(analytic, oracle, FAST)
    assert report["passed"], report
    assert oracle.thresholds[0] == pytest.approx(1 / 3, abs=2 / FAST.n_queries)


def test_dynamics_escalation_does_not_converge():
    pair = AdvertiserPair(v1=Affine(5.0, 0.0), v2=Constant(1.0))
    with pytest.raises(OracleNoConvergence):
        equilibrium_by_dynamics(pair, (Format.SPA, Format.SPA), FAST)


def test_discrete_target_slack_nonpositive():
    oracle = equilibrium_by_dynamics(MIRROR, (Format.SPA, Format.SPA), FAST)
    for i in range(2):
        assert oracle.spends[i] <= oracle.values[i] + 1e-9
