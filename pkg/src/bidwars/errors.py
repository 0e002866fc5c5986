"""Exception hierarchy shared across the solver library."""


class BidwarsError(Exception):
    """Base class for all library errors."""


class DomainError(BidwarsError):
    """Query index outside the valuation's domain."""


class NoInteriorCrossing(BidwarsError):
    """The two valuation curves never cross in the domain interior."""


class SingularElasticity(BidwarsError):
    """Elasticity requested at a point where the valuation vanishes."""


class DivergentElasticity(BidwarsError):
    """The elasticity integral does not converge."""


class QuadratureError(BidwarsError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class BracketError(BidwarsError):
    """Root bracket does not contain a sign change."""


class SaturatedLandscape(BidwarsError):
    """Marginal cost undefined: the bid already wins all inventory."""


class NoInteriorEquilibrium(BidwarsError):
    """No interior bidding equilibrium exists for this subgame."""


class DegenerateSolution(BidwarsError):
    """Solver produced a non-positive multiplier."""


class NoConvergence(BidwarsError):
    """Best-response iteration did not reach a fixed point."""


class OracleNoConvergence(BidwarsError):
    """Brute-force dynamics did not converge (reported, not fatal)."""


class IncompleteMatrix(BidwarsError):
    """Payoff matrix has unsolved cells where values are required."""


class ModeError(BidwarsError):
    """Operation requested outside its supported setting."""


class RangeError(BidwarsError):
    """Case-study parameter outside the family's admissible range."""


class ZeroMarket(BidwarsError):
    """Competition metric undefined: no positive value anywhere."""


class ConfigError(BidwarsError):
    """Scenario configuration failed validation."""
