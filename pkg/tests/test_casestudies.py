import math

import pytest

from bidwars.casestudies import (
    SEPTIC_ROOT_HI,
    SEPTIC_ROOT_LO,
    exp_alpha_of_t,
    exp_dominance_certificates,
    exp_equilibrium_alpha_of_t,
    exp_pair,
    exp_solve,
    lincon_alpha_of_x,
    lincon_pair,
    lincon_septic,
    lincon_solve,
    lincon_thresholds,
)
from bidwars.errors import RangeError
from bidwars.numerics import find_all_roots
from bidwars.subgame import Format, solve_profile


def test_alpha_of_x_round_trip_at_0_4():
    alpha = lincon_alpha_of_x(0.4)
    assert alpha == pytest.approx(2.9126, abs=1e-4)
    case = lincon_solve(alpha)
    assert case.q_f == pytest.approx(0.4, abs=1e-3)


def test_septic_has_one_admissible_root():
    for alpha in (2.2, 3.0, 3.8):
        roots = find_all_roots(
            lambda x: lincon_septic(alpha, x), SEPTIC_ROOT_LO, SEPTIC_ROOT_HI, 64
        )
        assert len(roots) == 1


def test_lincon_closed_forms():
    case = lincon_solve(2.5)
    assert case.rev_fpa_fpa == pytest.approx(1.45, abs=1e-12)
    assert case.rev_spa_spa == pytest.approx(1.4, abs=1e-12)
    assert case.spa_spa_q == pytest.approx(0.6, abs=1e-12)
    assert case.spa_spa_mu_1 == pytest.approx(4 / 3, abs=1e-12)
    assert case.spa_spa_mu_2 == pytest.approx(2.0, abs=1e-12)


def test_lincon_spa_revenue_limit_near_two():
    case = lincon_solve(2.0 + 1e-6)
    assert case.rev_spa_spa == pytest.approx(1.0, abs=1e-5)
    assert case.spa_spa_q == pytest.approx(1.0, abs=1e-5)


def test_lincon_range_error():
    with pytest.raises(RangeError):
        lincon_solve(1.9)
    with pytest.raises(RangeError):
        lincon_solve(4.0)


def test_lincon_agrees_with_general_solver():
    for i in range(20):
        alpha = 2.05 + (3.95 - 2.05) * i / 19
        case = lincon_solve(alpha)
        pair = lincon_pair(alpha)
        ff = solve_profile(pair, (Format.FPA, Format.FPA))
        assert ff.revenues[0] == pytest.approx(case.rev_fpa_fpa, abs=1e-7)
        ss = solve_profile(pair, (Format.SPA, Format.SPA))
        assert ss.revenues[0] == pytest.approx(case.rev_spa_spa, abs=1e-7)
        assert ss.thresholds[0] == pytest.approx(case.spa_spa_q, abs=1e-7)
        fs = solve_profile(pair, (Format.FPA, Format.SPA))
        assert fs.thresholds[0] == pytest.approx(case.q_f, abs=1e-7)
        assert fs.thresholds[1] == pytest.approx(case.q_s, abs=1e-7)
        assert fs.revenues[0] == pytest.approx(case.rev_mixed_fpa, abs=1e-7)
        assert fs.revenues[1] == pytest.approx(case.rev_mixed_spa, abs=1e-7)
        assert fs.multipliers[0][0] == pytest.approx(case.mu_1f, abs=1e-7)
        assert fs.multipliers[0][1] == pytest.approx(case.mu_1s, abs=1e-7)
        assert fs.multipliers[1][0] == pytest.approx(case.mu_2f, abs=1e-7)
        assert fs.multipliers[1][1] == pytest.approx(case.mu_2s, abs=1e-7)


def test_q_f_monotone_decreasing_in_alpha():
    prev = None
    for i in range(25):
        alpha = 2.05 + (3.95 - 2.05) * i / 24
        q_f = lincon_solve(alpha).q_f
        if prev is not None:
            assert q_f < prev
        prev = q_f


def test_lincon_thresholds_match_reported_values():
    a1, a2, a3 = lincon_thresholds()
    assert a1 == pytest.approx(2.1822, abs=1e-3)
    assert a2 == pytest.approx(3.52753, abs=1e-3)
    assert a3 == pytest.approx(3.5822, abs=1e-3)


def test_exp_alpha_of_t_published_map():
    assert exp_alpha_of_t(0.5) == pytest.approx(0.3488, abs=1e-4)
    ts = [0.05 + 0.6 * i / 30 for i in range(31)]
    vals = [exp_alpha_of_t(t) for t in ts]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    with pytest.raises(RangeError):
        exp_alpha_of_t(0.75)


def test_exp_alpha_of_t_small_t_vanishes():
    assert exp_alpha_of_t(1e-4) == pytest.approx(0.0, abs=1e-3)


def test_exp_published_map_inversion_lands_in_band():
    from bidwars.numerics import find_root

    t = find_root(lambda s: exp_alpha_of_t(s) - 1 / 3, 0.05, 0.69)
    assert 0.36 < t < 0.609


def test_exp_equilibrium_map_mirrors_lincon():
    # the two families coincide under alpha -> 1/alpha with t playing q_F
    for t in (0.25, 0.4, 0.55):
        assert exp_equilibrium_alpha_of_t(t) == pytest.approx(
            1.0 / lincon_alpha_of_x(t), rel=1e-12
        )


def test_exp_solve_closed_forms():
    alpha = 1 / 3
    case = exp_solve(alpha)
    assert case.rev_fpa_fpa == pytest.approx(5 / 9, abs=1e-12)
    assert case.rev_spa_spa == pytest.approx(5 / 9, abs=1e-12)
    assert case.spa_spa_mu_1 == pytest.approx(2.0, abs=1e-12)
    assert case.spa_spa_mu_2 == pytest.approx(2.0, abs=1e-12)
    assert case.y == 1.0 and case.x == 2.0
    assert case.u == pytest.approx(4 * case.t**3 / (1 + case.t**2), rel=1e-12)
    # frozen from the independent best-response grid search
    assert case.t == pytest.approx(0.38293, abs=5e-5)
    assert case.w == pytest.approx(0.87048, abs=5e-5)
    assert case.z == pytest.approx(3.40342, abs=5e-5)


def test_exp_solve_agrees_with_general_solver():
    for i in range(20):
        alpha = 0.26 + (0.49 - 0.26) * i / 19
        case = exp_solve(alpha)
        pair = exp_pair(alpha)
        ff = solve_profile(pair, (Format.FPA, Format.FPA))
        assert ff.revenues[0] == pytest.approx(case.rev_fpa_fpa, abs=1e-7)
        ss = solve_profile(pair, (Format.SPA, Format.SPA))
        assert ss.revenues[0] == pytest.approx(case.rev_spa_spa, abs=1e-7)
        fs = solve_profile(pair, (Format.FPA, Format.SPA))
        assert fs.thresholds[0] == pytest.approx(case.q_f, abs=1e-7)
        assert fs.thresholds[1] == pytest.approx(case.q_s, abs=1e-7)
        assert fs.revenues[0] == pytest.approx(case.rev_mixed_fpa, abs=1e-7)
        assert fs.revenues[1] == pytest.approx(case.rev_mixed_spa, abs=1e-7)
        assert fs.multipliers[0][0] == pytest.approx(case.y, abs=1e-7)
        assert fs.multipliers[0][1] == pytest.approx(case.x, abs=1e-7)
        assert fs.multipliers[1][0] == pytest.approx(case.w, abs=1e-7)
        assert fs.multipliers[1][1] == pytest.approx(case.z, abs=1e-7)


def test_exp_solve_budget_residuals_machine_small():
    # the four defining relations: both budgets and both bid crossings
    alpha = 0.42
    case = exp_solve(alpha)
    t, u, x, y, z, w = case.t, case.u, case.x, case.y, case.z, case.w
    assert abs((y - 1) * alpha * t - (alpha * u - z * u**2 / 2)) <= 1e-9
    assert abs((w - 1) * (1 - t**2) / 2 - ((1 - u**2) / 2 - x * alpha * (1 - u))) <= 1e-9
    assert abs(y * alpha - w * t) <= 1e-9  # first-price crossing
    assert abs(x * alpha - z * u) <= 1e-9  # second-price crossing


def test_exp_range_error():
    with pytest.raises(RangeError):
        exp_solve(0.2)
    with pytest.raises(RangeError):
        exp_solve(0.55)


def test_exp_dominance_certificates_signs():
    ts = [0.36 + (0.609 - 0.36) * (i + 0.5) / 20 for i in range(20)]
    rows = exp_dominance_certificates(ts)
    assert all(r["f1"] < 0.0 for r in rows)
    assert all(r["f2"] > 0.0 for r in rows)


def test_exp_certificate_values_at_half():
    row = exp_dominance_certificates([0.5])[0]
    # published-map mixed revenues at t = 0.5: first-price side 0.3068,
    # second-price side 0.8033
    w = row["f1"] + 1 / 1.25
    assert w * (1 + 0.25) / 2 == pytest.approx(0.3068, abs=1e-4)
    assert row["f2"] + 5 / 8 == pytest.approx(0.8033, abs=1e-4)
