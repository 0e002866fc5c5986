"""Command-line front end: scenario configs in, deterministic reports out.

Commands
--------
solve   --config F --profile SPA,FPA     one subgame, JSON report
game    --config F                       payoff matrix + equilibria, JSON
sweep   --config F --param alpha --from A --to B --steps N --out csv
verify  --config F                       analytic vs brute-force oracle

Exit codes: 0 success, 1 solver failure, 2 invalid config, 3 oracle
mismatch in verify. BIDWARS_THREADS caps sweep parallelism.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

from . import __version__
from .errors import BidwarsError, ConfigError, OracleNoConvergence
from .game import build_matrix, find_equilibria, market_share_dominance
from .metrics import market_metrics
from .oracle import compare, equilibrium_by_dynamics
from .scenario import ScenarioConfig, load_config
from .subgame import (
    Format,
    parse_profile,
    solve_profile,
    solve_single_strategic,
    solve_uniform_mode,
)
from .valuation import ValuationSpec

SWEEP_HEADER = (
    "alpha,profile,rev_1,rev_2,q_F,q_S,mu_1F,mu_1S,mu_2F,mu_2S,"
    "w_star,c_a,q_param,classification,error"
)


def _solve_for_config(config: ScenarioConfig, profile):
    if config.mode == "single_strategic":
        return solve_single_strategic(
            config.advertisers[0],
            list(config.static_landscapes),
            profile,
            config.shares.gamma,
            config.numerics,
        )
    if config.mode == "uniform":
        return solve_uniform_mode(
            config.pair(), profile, config.shares.gamma, config.numerics
        )
    return solve_profile(config.pair(), profile, config.shares.gamma, config.numerics)


def _metrics_block(config: ScenarioConfig) -> Optional[dict]:
    if config.mode == "single_strategic":
        return None
    return market_metrics(config.pair(), config.shares.gamma, config.numerics).to_dict()


def cmd_solve(config: ScenarioConfig, profile_text: Optional[str] = None) -> dict:
    """Solve one subgame and emit the full report document."""
    if profile_text is not None:
        profile = parse_profile(profile_text)
    elif config.profile is not None:
        profile = config.profile
    else:
        raise ConfigError("a profile is required (flag --profile or config key)")
    if len(profile) != config.shares.count:
        raise ConfigError("profile length must match platform count")
    solution = _solve_for_config(config, profile)
    return {
        "tool": {"name": "bidwars", "version": __version__},
        "config": config.echo(),
        "solution": solution.to_dict(),
        "metrics": _metrics_block(config),
    }


def _classification(report) -> str:
    if report.dominance == "SPADominant":
        return "spa_dominant"
    if report.dominance == "FPADominant":
        return "fpa_dominant"
    if report.dominance == "Degenerate":
        return "degenerate"
    pure = set(report.pure_ne)
    if ("SPA", "SPA") in pure and ("FPA", "FPA") in pure:
        return "both_pure"
    if ("SPA", "FPA") in pure and ("FPA", "SPA") in pure:
        return "off_diagonal"
    if pure:
        return "+".join(sorted("".join(p) for p in pure)).lower()
    return "none"


def cmd_game(config: ScenarioConfig) -> dict:
    """Payoff matrix, equilibrium set, and the dominance test when it applies."""
    pair = config.pair()
    matrix = build_matrix(pair, config.shares, config.mode, config.numerics)
    metrics = market_metrics(pair, config.shares.gamma, config.numerics)
    equilibria = find_equilibria(matrix, metrics.q_param)
    q_test = None
    if metrics.q_param is not None:
        q_test = market_share_dominance(pair, config.shares, config.numerics).to_dict()
    return {
        "tool": {"name": "bidwars", "version": __version__},
        "config": config.echo(),
        "matrix": matrix.to_dict(),
        "equilibria": equilibria.to_dict(),
        "q_test": q_test,
        "metrics": metrics.to_dict(),
        "classification": _classification(equilibria),
    }


def _with_alpha(block: dict, alpha: float) -> dict:
    out = dict(block)
    family = out.get("family")
    if family in ("monomial", "exponential_growth"):
        out["alpha"] = alpha
    elif family == "affine":
        out["slope"] = alpha
    elif family == "scaled_exponential_decay":
        out["scale"] = alpha
    elif family in ("mirror_of", "scaled"):
        out["of"] = _with_alpha(out["of"], alpha)
    else:
        raise ConfigError(f"family '{family}' has no sweepable alpha parameter")
    return out


def _sweep_rows(config: ScenarioConfig, alpha: float) -> List[str]:
    raw = json.loads(json.dumps(config.raw))
    raw["advertisers"] = [_with_alpha(raw["advertisers"][0], alpha)] + raw["advertisers"][1:]
    if raw["advertisers"][1].get("family") == "mirror_of":
        raw["advertisers"][1] = {"family": "mirror_of", "of": raw["advertisers"][0]}
    step_config = ScenarioConfig.from_dict(raw)
    fmt = lambda x: "" if x is None else repr(float(x))
    try:
        pair = step_config.pair()
        matrix = build_matrix(pair, step_config.shares, step_config.mode, step_config.numerics)
        metrics = market_metrics(pair, step_config.shares.gamma, step_config.numerics)
        classification = _classification(find_equilibria(matrix, metrics.q_param))
    except BidwarsError as exc:
        return [f"{alpha!r},,,,,,,,,,,,,,{type(exc).__name__}"]
    rows = []
    for key in (("SPA", "SPA"), ("SPA", "FPA"), ("FPA", "SPA"), ("FPA", "FPA")):
        label = ",".join(key)
        if key in matrix.errors:
            rows.append(
                f"{alpha!r},{label.replace(',', '|')},,,,,,,,,"
                f"{fmt(metrics.w_star)},{fmt(metrics.competition)},{fmt(metrics.q_param)},"
                f"{classification},{matrix.errors[key].split(':')[0]}"
            )
            continue
        sol = matrix.solutions[key]
        q_f = q_s = None
        mu = {"1F": None, "1S": None, "2F": None, "2S": None}
        for j, f in enumerate(key):
            if f == "FPA":
                q_f = sol.thresholds[j]
                mu["1F"], mu["2F"] = sol.multipliers[0][j], sol.multipliers[1][j]
            else:
                q_s = sol.thresholds[j]
                mu["1S"], mu["2S"] = sol.multipliers[0][j], sol.multipliers[1][j]
        rows.append(
            f"{alpha!r},{label.replace(',', '|')},"
            f"{fmt(sol.revenues[0])},{fmt(sol.revenues[1])},{fmt(q_f)},{fmt(q_s)},"
            f"{fmt(mu['1F'])},{fmt(mu['1S'])},{fmt(mu['2F'])},{fmt(mu['2S'])},"
            f"{fmt(metrics.w_star)},{fmt(metrics.competition)},{fmt(metrics.q_param)},"
            f"{classification},"
        )
    return rows


def cmd_sweep(
    config: ScenarioConfig, param: str, start: float, stop: float, steps: int
) -> str:
    """CSV sweep over the family parameter; one row per (step, profile)."""
    if param != "alpha":
        raise ConfigError("only the 'alpha' family parameter can be swept")
    if steps < 1:
        raise ConfigError("steps must be at least 1")
    alphas = [start + (stop - start) * i / max(steps - 1, 1) for i in range(steps)]
    workers = int(os.environ.get("BIDWARS_THREADS", "0")) or min(8, os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        blocks = list(pool.map(lambda a: _sweep_rows(config, a), alphas))
    out = io.StringIO()
    out.write(SWEEP_HEADER + "\n")
    for block in blocks:  # assembled in input order regardless of completion
        for row in block:
            out.write(row + "\n")
    return out.getvalue()


def cmd_verify(config: ScenarioConfig) -> dict:
    """Compare analytic solutions against brute-force dynamics."""
    pair = config.pair()
    profiles = (
        [config.profile]
        if config.profile is not None
        else [
            (Format.FPA, Format.FPA),
            (Format.SPA, Format.SPA),
            (Format.FPA, Format.SPA),
        ]
    )
    checks = []
    warnings = []
    passed = True
    for profile in profiles:
        label = ",".join(f.value for f in profile)
        analytic = solve_profile(pair, profile, config.shares.gamma, config.numerics)
        try:
            oracle = equilibrium_by_dynamics(pair, profile, config.oracle, config.shares.gamma)
        except OracleNoConvergence as exc:
            warnings.append({"profile": label, "warning": str(exc)})
            continue
        report = compare(analytic, oracle, config.oracle)
        checks.append(
            {
                "profile": label,
                "passed": report["passed"],
                "deltas": {k: float(v) for k, v in sorted(report["deltas"].items())},
                "analytic_revenues": list(analytic.revenues),
                "oracle_revenues": list(oracle.revenues),
            }
        )
        passed &= report["passed"]
    return {
        "tool": {"name": "bidwars", "version": __version__},
        "config": config.echo(),
        "checks": checks,
        "warnings": warnings,
        "passed": passed,
    }


def _emit(doc: dict) -> None:
    json.dump(doc, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _error_block(exc: Exception) -> None:
    _emit({"error": {"type": type(exc).__name__, "message": str(exc)}})


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="bidwars",
        description="Bidding equilibria and auction-format competition for ad platforms",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one subgame")
    p_solve.add_argument("--config", required=True)
    p_solve.add_argument("--profile", help="e.g. SPA,FPA")

    p_game = sub.add_parser("game", help="payoff matrix and equilibria")
    p_game.add_argument("--config", required=True)

    p_sweep = sub.add_parser("sweep", help="parameter sweep to CSV")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--param", required=True)
    p_sweep.add_argument("--from", dest="start", type=float, required=True)
    p_sweep.add_argument("--to", dest="stop", type=float, required=True)
    p_sweep.add_argument("--steps", type=int, required=True)
    p_sweep.add_argument("--out", help="output CSV path (default stdout)")

    p_verify = sub.add_parser("verify", help="analytic vs oracle comparison")
    p_verify.add_argument("--config", required=True)

    args = parser.parse_args(argv)

    try:
        config = load_config(args.config)
    except ConfigError as exc:
        _error_block(exc)
        return 2

    try:
        if args.command == "solve":
            _emit(cmd_solve(config, args.profile))
            return 0
        if args.command == "game":
            _emit(cmd_game(config))
            return 0
        if args.command == "sweep":
            csv_text = cmd_sweep(config, args.param, args.start, args.stop, args.steps)
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(csv_text)
            else:
                sys.stdout.write(csv_text)
            return 0
        if args.command == "verify":
            doc = cmd_verify(config)
            _emit(doc)
            return 0 if doc["passed"] else 3
    except ConfigError as exc:
        _error_block(exc)
        return 2
    except BidwarsError as exc:
        _error_block(exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
