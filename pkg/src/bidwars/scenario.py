"""Scenario configuration: the JSON document the CLI consumes.

Schema
------
{
  "advertisers": [<valuation block>, <valuation block>],
  "platforms": {"count": 2, "shares": [0.5, 0.5], "normalization": "scaled"},
  "mode": "per_platform" | "uniform" | "single_strategic",
  "profile": ["SPA", "FPA"],                  # optional
  "static_landscapes": [<valuation block>, ...],  # single_strategic only
  "numerics": {"quad_abs_tol": ..., "root_abs_tol": ...},   # optional
  "oracle": {"n_queries": ..., "multiplier_points": ...}    # optional
}

Valuation blocks: {"family": "monomial", "alpha": 2.0},
{"family": "affine", "slope": 2.5, "intercept": 0.0},
{"family": "constant", "level": 1.0},
{"family": "scaled_exponential_decay", "scale": 0.33, "rate": 1.0},
{"family": "exponential_growth", "alpha": 1.0},
{"family": "mirror_of", "of": {...}}, {"family": "scaled", "factor": c, "of": {...}}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .errors import ConfigError
from .game import MarketShares
from .numerics import NumericsConfig
from .oracle import OracleConfig
from .subgame import AuctionProfile, parse_profile
from .valuation import AdvertiserPair, ValuationSpec

__all__ = ["ScenarioConfig", "load_config"]

_MODES = ("per_platform", "uniform", "single_strategic")


@dataclass
class ScenarioConfig:
    advertisers: Tuple[ValuationSpec, ...]
    shares: MarketShares
    mode: str = "per_platform"
    profile: Optional[AuctionProfile] = None
    static_landscapes: Tuple[ValuationSpec, ...] = ()
    numerics: NumericsConfig = field(default_factory=NumericsConfig)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    raw: dict = field(default_factory=dict)

    def pair(self) -> AdvertiserPair:
        if len(self.advertisers) != 2:
            raise ConfigError("two advertiser blocks are required")
        try:
            return AdvertiserPair(v1=self.advertisers[0], v2=self.advertisers[1])
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    @staticmethod
    def from_dict(data: dict) -> "ScenarioConfig":
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object")
        unknown = set(data) - {
            "advertisers",
            "platforms",
            "mode",
            "profile",
            "static_landscapes",
            "numerics",
            "oracle",
        }
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")

        mode = data.get("mode", "per_platform")
        if mode not in _MODES:
            raise ConfigError(f"mode must be one of {_MODES}")

        platforms = data.get("platforms", {})
        if not isinstance(platforms, dict):
            raise ConfigError("'platforms' must be an object")
        count = platforms.get("count", 2)
        normalization = platforms.get("normalization", "full-copy")
        shares_raw = platforms.get("shares")
        if shares_raw is None:
            shares_raw = [1.0] * count if normalization == "full-copy" else [1.0 / count] * count
        if len(shares_raw) != count:
            raise ConfigError("'shares' length must match platform count")
        try:
            shares = MarketShares(tuple(float(g) for g in shares_raw), normalization)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

        adv_raw = data.get("advertisers", [])
        if mode != "single_strategic" and len(adv_raw) != 2:
            raise ConfigError("exactly two advertiser blocks are required")
        if mode == "single_strategic" and len(adv_raw) != 1:
            raise ConfigError("single_strategic mode takes one advertiser block")
        try:
            advertisers = tuple(ValuationSpec.from_dict(b) for b in adv_raw)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

        statics_raw = data.get("static_landscapes", [])
        if mode == "single_strategic":
            if len(statics_raw) != count:
                raise ConfigError("one static landscape per platform is required")
        elif statics_raw:
            raise ConfigError("static_landscapes only apply to single_strategic mode")
        try:
            statics = tuple(ValuationSpec.from_dict(b) for b in statics_raw)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

        profile = None
        if data.get("profile") is not None:
            raw_prof = data["profile"]
            text = ",".join(raw_prof) if isinstance(raw_prof, list) else str(raw_prof)
            try:
                profile = parse_profile(text)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
            if len(profile) != count:
                raise ConfigError("profile length must match platform count")

        try:
            numerics = NumericsConfig(**data.get("numerics", {}))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad numerics block: {exc}") from exc
        try:
            oracle = OracleConfig(**data.get("oracle", {}))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad oracle block: {exc}") from exc

        return ScenarioConfig(
            advertisers=advertisers,
            shares=shares,
            mode=mode,
            profile=profile,
            static_landscapes=statics,
            numerics=numerics,
            oracle=oracle,
            raw=data,
        )

    def echo(self) -> dict:
        return json.loads(json.dumps(self.raw, sort_keys=True))


def load_config(path: str) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return ScenarioConfig.from_dict(data)
