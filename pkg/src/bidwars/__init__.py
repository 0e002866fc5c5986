"""Solvers for bidding equilibria and auction-format competition between
ad platforms selling to ROI-constrained autobidding advertisers."""

__version__ = "0.1.0"

from .game import (
    EquilibriumReport,
    MarketShares,
    PayoffMatrix,
    build_matrix,
    find_equilibria,
    market_share_dominance,
    mirrored_profile_solution,
)
from .metrics import MarketMetrics, competition, liquid_welfare, market_metrics, q_parameter
from .numerics import NumericsConfig, find_all_roots, find_root, integrate
from .oracle import OracleConfig, best_response, compare, equilibrium_by_dynamics
from .scenario import ScenarioConfig, load_config
from .subgame import (
    AuctionProfile,
    Format,
    LandscapeView,
    SubgameSolution,
    check_existence_condition,
    marginal_cost,
    parse_profile,
    solve_fpa_fpa,
    solve_fpa_spa,
    solve_profile,
    solve_single_strategic,
    solve_spa_spa,
    solve_uniform_mode,
)
from .valuation import (
    AdvertiserPair,
    Affine,
    Constant,
    ExponentialGrowth,
    MirrorOf,
    Monomial,
    Scaled,
    ScaledExponentialDecay,
    ValuationSpec,
    bid_reaction,
    efficient_threshold,
    elasticity,
    eta,
    evaluate,
    mirrored_pair,
)

__all__ = [name for name in dir() if not name.startswith("_")]
