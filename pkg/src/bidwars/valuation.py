"""Advertiser valuation curves and the pair-level quantities built on them.

Valuations are closed-form families rather than arbitrary callables: every
family carries an exact derivative and an exact antiderivative, so the
solvers never depend on truncated or approximate integrals. Curves on
``[0, inf)`` integrate their tails analytically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Tuple

from .errors import (
    DivergentElasticity,
    DomainError,
    NoInteriorCrossing,
    SingularElasticity,
)
from .numerics import DEFAULT_NUMERICS, NumericsConfig, find_all_roots

__all__ = [
    "ValuationSpec",
    "Monomial",
    "Affine",
    "Constant",
    "ScaledExponentialDecay",
    "ExponentialGrowth",
    "MirrorOf",
    "Scaled",
    "AdvertiserPair",
    "evaluate",
    "derivative",
    "eta",
    "elasticity",
    "bid_reaction",
    "efficient_threshold",
    "mirrored_pair",
]

_VALUE_TOL = 1e-10  # absolute threshold-solving tolerance; valuations are O(1)
_GRID = 256  # sample count for monotonicity checks


class ValuationSpec:
    """Base class for closed-form valuation curves v(q) >= 0."""

    #: (lo, hi) with hi == math.inf for curves on the half line.
    domain: Tuple[float, float] = (0.0, 1.0)

    def value(self, q: float) -> float:
        self._check(q)
        return self._value(q)

    def slope(self, q: float) -> float:
        self._check(q)
        return self._slope(q)

    def integral(self, a: float, b: float) -> float:
        """Exact integral of v over [a, b] (b may be math.inf)."""
        self._check(a)
        if b != math.inf:
            self._check(b)
        if b < a:
            raise ValueError("integral requires a <= b")
        return self._integral(a, b)

    def _check(self, q: float) -> None:
        lo, hi = self.domain
        if q < lo - 1e-12 or q > hi + 1e-12:
            raise DomainError(f"q={q} outside domain [{lo}, {hi}]")

    # Subclasses implement the unchecked kernels.
    def _value(self, q: float) -> float:
        raise NotImplementedError

    def _slope(self, q: float) -> float:
        raise NotImplementedError

    def _integral(self, a: float, b: float) -> float:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def from_dict(data: dict) -> "ValuationSpec":
        try:
            family = data["family"]
        except (TypeError, KeyError):
            raise ValueError("valuation block needs a 'family' key") from None
        try:
            if family == "monomial":
                return Monomial(float(data["alpha"]))
            if family == "affine":
                return Affine(float(data["slope"]), float(data.get("intercept", 0.0)))
            if family == "constant":
                return Constant(float(data["level"]))
            if family == "scaled_exponential_decay":
                return ScaledExponentialDecay(float(data["scale"]), float(data["rate"]))
            if family == "exponential_growth":
                return ExponentialGrowth(float(data["alpha"]))
            if family == "mirror_of":
                return MirrorOf(ValuationSpec.from_dict(data["of"]))
            if family == "scaled":
                return Scaled(ValuationSpec.from_dict(data["of"]), float(data["factor"]))
        except KeyError as exc:
            raise ValueError(f"family '{family}' is missing parameter {exc}") from None
        raise ValueError(f"unknown valuation family '{family}'")


@dataclass(frozen=True)
class Monomial(ValuationSpec):
    """v(q) = q ** alpha on [0, 1]."""

    alpha: float
    domain: Tuple[float, float] = field(default=(0.0, 1.0), init=False)

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise ValueError("monomial exponent must be positive")

    def _value(self, q: float) -> float:
        return max(q, 0.0) ** self.alpha

    def _slope(self, q: float) -> float:
        if q <= 0.0:
            return 1.0 if self.alpha == 1.0 else (math.inf if self.alpha < 1.0 else 0.0)
        return self.alpha * q ** (self.alpha - 1.0)

    def _integral(self, a: float, b: float) -> float:
        k = self.alpha + 1.0
        return (b**k - a**k) / k

    def to_dict(self) -> dict:
        return {"family": "monomial", "alpha": self.alpha}


@dataclass(frozen=True)
class Affine(ValuationSpec):
    """v(q) = slope * q + intercept on [0, 1], nonnegative throughout."""

    slope_coef: float
    intercept: float = 0.0
    domain: Tuple[float, float] = field(default=(0.0, 1.0), init=False)

    def __post_init__(self) -> None:
        if self.intercept < 0 or self.slope_coef + self.intercept < 0:
            raise ValueError("affine valuation must be nonnegative on [0, 1]")

    def _value(self, q: float) -> float:
        return self.slope_coef * q + self.intercept

    def _slope(self, q: float) -> float:
        return self.slope_coef

    def _integral(self, a: float, b: float) -> float:
        return 0.5 * self.slope_coef * (b * b - a * a) + self.intercept * (b - a)

    def to_dict(self) -> dict:
        return {"family": "affine", "slope": self.slope_coef, "intercept": self.intercept}


@dataclass(frozen=True)
class Constant(ValuationSpec):
    """v(q) = level on [0, 1]."""

    level: float
    domain: Tuple[float, float] = field(default=(0.0, 1.0), init=False)

    def __post_init__(self) -> None:
        if self.level < 0:
            raise ValueError("constant valuation must be nonnegative")

    def _value(self, q: float) -> float:
        return self.level

    def _slope(self, q: float) -> float:
        return 0.0

    def _integral(self, a: float, b: float) -> float:
        return self.level * (b - a)

    def to_dict(self) -> dict:
        return {"family": "constant", "level": self.level}


@dataclass(frozen=True)
class ScaledExponentialDecay(ValuationSpec):
    """v(q) = scale * exp(-rate * q) on [0, inf)."""

    scale: float
    rate: float
    domain: Tuple[float, float] = field(default=(0.0, math.inf), init=False)

    def __post_init__(self) -> None:
        if self.scale <= 0 or self.rate <= 0:
            raise ValueError("decay scale and rate must be positive")

    def _value(self, q: float) -> float:
        return self.scale * math.exp(-self.rate * q)

    def _slope(self, q: float) -> float:
        return -self.rate * self.scale * math.exp(-self.rate * q)

    def _integral(self, a: float, b: float) -> float:
        upper = 0.0 if b == math.inf else math.exp(-self.rate * b)
        return self.scale / self.rate * (math.exp(-self.rate * a) - upper)

    def to_dict(self) -> dict:
        return {"family": "scaled_exponential_decay", "scale": self.scale, "rate": self.rate}


@dataclass(frozen=True)
class ExponentialGrowth(ValuationSpec):
    """v(q) = exp(alpha * q) - 1 on [0, 1]."""

    alpha: float
    domain: Tuple[float, float] = field(default=(0.0, 1.0), init=False)

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise ValueError("growth exponent must be positive")

    def _value(self, q: float) -> float:
        return math.exp(self.alpha * q) - 1.0

    def _slope(self, q: float) -> float:
        return self.alpha * math.exp(self.alpha * q)

    def _integral(self, a: float, b: float) -> float:
        return (math.exp(self.alpha * b) - math.exp(self.alpha * a)) / self.alpha - (b - a)

    def to_dict(self) -> dict:
        return {"family": "exponential_growth", "alpha": self.alpha}


@dataclass(frozen=True)
class MirrorOf(ValuationSpec):
    """v(q) = other(1 - q); only valid when the inner curve lives on [0, 1]."""

    inner: ValuationSpec
    domain: Tuple[float, float] = field(default=(0.0, 1.0), init=False)

    def __post_init__(self) -> None:
        if self.inner.domain != (0.0, 1.0):
            raise ValueError("mirroring requires the inner curve on [0, 1]")

    def _value(self, q: float) -> float:
        return self.inner._value(1.0 - q)

    def _slope(self, q: float) -> float:
        return -self.inner._slope(1.0 - q)

    def _integral(self, a: float, b: float) -> float:
        return self.inner._integral(1.0 - b, 1.0 - a)

    def to_dict(self) -> dict:
        return {"family": "mirror_of", "of": self.inner.to_dict()}


@dataclass(frozen=True)
class Scaled(ValuationSpec):
    """v(q) = factor * other(q); preserves the inner curve's domain."""

    inner: ValuationSpec
    factor: float

    def __post_init__(self) -> None:
        if self.factor <= 0:
            raise ValueError("scaling factor must be positive")
        object.__setattr__(self, "domain", self.inner.domain)

    def _value(self, q: float) -> float:
        return self.factor * self.inner._value(q)

    def _slope(self, q: float) -> float:
        return self.factor * self.inner._slope(q)

    def _integral(self, a: float, b: float) -> float:
        return self.factor * self.inner._integral(a, b)

    def to_dict(self) -> dict:
        return {"family": "scaled", "factor": self.factor, "of": self.inner.to_dict()}


def evaluate(spec: ValuationSpec, q: float) -> float:
    """v(q) per the family's closed form."""
    return spec.value(q)


def derivative(spec: ValuationSpec, q: float) -> float:
    """Exact analytic derivative v'(q)."""
    return spec.slope(q)


def eta(spec: ValuationSpec, q: float) -> float:
    """Relative slope magnitude |v'(q) / v(q)|."""
    v = spec.value(q)
    if v <= 0.0:
        raise SingularElasticity(f"valuation vanishes at q={q}")
    return abs(spec.slope(q) / v)


def _interior_grid(lo: float, hi: float, n: int) -> list:
    """Interior sample points; for half-line domains, uniform in exp(-q)."""
    if hi == math.inf:
        return [-math.log(1.0 - (i + 0.5) / n * (1.0 - 1e-9)) for i in range(n)]
    span = hi - lo
    return [lo + span * (i + 0.5) / n for i in range(n)]


@dataclass(frozen=True)
class AdvertiserPair:
    """Two advertisers' curves with v1/v2 non-decreasing across queries.

    Queries are indexed so advertiser 1 grows relatively stronger with q:
    whoever wins query q with the larger bid mu*v also wins everything on
    their side of the crossing point. Targets are normalized to 1 for
    both advertisers, so "spend <= value" is the budget constraint
    throughout.
    """

    v1: ValuationSpec
    v2: ValuationSpec

    def __post_init__(self) -> None:
        if self.v1.domain != self.v2.domain:
            raise ValueError("both valuations must share one domain")
        ratios = []
        for q in _interior_grid(*self.domain, _GRID):
            a, b = self.v1._value(q), self.v2._value(q)
            ratios.append(math.inf if b <= 0.0 else a / b)
        tol = 1e-9
        for r0, r1 in zip(ratios, ratios[1:]):
            if r1 < r0 * (1.0 - tol) - tol:
                raise ValueError("v1/v2 must be non-decreasing across queries")

    @property
    def domain(self) -> Tuple[float, float]:
        return self.v1.domain

    def h(self, q: float) -> float:
        v2 = self.v2.value(q)
        if v2 <= 0.0:
            return math.inf
        return self.v1.value(q) / v2

    # Segment integrals used throughout the solvers. "head" integrates from
    # the lower end of the domain, "tail" to the upper end.
    def head1(self, q: float) -> float:
        return self.v1.integral(self.domain[0], q)

    def head2(self, q: float) -> float:
        return self.v2.integral(self.domain[0], q)

    def tail1(self, q: float) -> float:
        return self.v1.integral(q, self.domain[1])

    def tail2(self, q: float) -> float:
        return self.v2.integral(q, self.domain[1])

    def scan_upper(self) -> float:
        """Finite query bound capturing all but ~1e-13 of both curves' mass."""
        lo, hi = self.domain
        if hi != math.inf:
            return hi
        total = self.tail1(lo) + self.tail2(lo)
        q = 1.0
        while self.tail1(q) + self.tail2(q) > 1e-13 * total and q < 700.0:
            q *= 2.0
        return q

    def is_mirrored(self, tol: float = 1e-9) -> bool:
        """True when v2(q) == v1(1-q) across a sample grid (domain [0,1])."""
        if self.domain != (0.0, 1.0):
            return False
        scale = max(self.v1.value(1.0), self.v2.value(0.0), 1e-300)
        for q in _interior_grid(0.0, 1.0, 64):
            if abs(self.v2.value(q) - self.v1.value(1.0 - q)) > tol * scale:
                return False
        return True

    def h_is_convex(self, tol: float = 1e-7) -> bool:
        """Sampled convexity check of v1/v2 on the domain interior."""
        hi = self.scan_upper()
        qs = _interior_grid(self.domain[0], min(hi, 50.0), 129)
        vals = []
        for q in qs:
            v2 = self.v2.value(q)
            if v2 <= 0.0:
                return True  # ratio blows up at the top end; treat as unverified-convex
            vals.append(self.v1.value(q) / v2)
        for a, b, c in zip(vals, vals[1:], vals[2:]):
            if b > 0.5 * (a + c) + tol * max(1.0, abs(b)):
                return False
        return True


def efficient_threshold(
    pair: AdvertiserPair, config: NumericsConfig = DEFAULT_NUMERICS
) -> float:
    """The query where v1 and v2 cross; v1 is below before it, above after.

    Requires exactly one interior sign change of v1 - v2.
    """
    lo = pair.domain[0]
    hi = pair.scan_upper()
    diff = lambda q: pair.v1.value(q) - pair.v2.value(q)
    eps = 1e-9 * (hi - lo)
    roots = find_all_roots(diff, lo + eps, hi - eps, n_subdiv=512, config=config)
    crossings = [r for r in roots if diff(r - eps) < 0.0 < diff(r + eps) or diff(r + eps) < 0.0 < diff(r - eps)]
    if len(crossings) != 1:
        raise NoInteriorCrossing(
            f"expected one interior crossing of v1 and v2, found {len(crossings)}"
        )
    q_eff = crossings[0]
    if diff(q_eff - eps) > 0.0:
        raise NoInteriorCrossing("v1 exceeds v2 below the crossing; queries mis-ordered")
    assert abs(diff(q_eff)) <= 1e3 * _VALUE_TOL
    return q_eff


def elasticity(pair: AdvertiserPair, advertiser: int, q: float) -> float:
    """Bid-sensitivity metric at q per the standard |v'|/v definition.

    Advertiser 1: 1 + (eta1 + eta2) * (value remaining above q) / v1(q);
    advertiser 2 integrates the value below q instead. Both are >= 1.
    """
    coeff = eta(pair.v1, q) + eta(pair.v2, q)
    return _reaction_from_coeff(pair, advertiser, q, coeff)


def bid_reaction(pair: AdvertiserPair, advertiser: int, q: float) -> float:
    """Equilibrium ratio of SPA to FPA multipliers implied at threshold q.

    Same shape as :func:`elasticity` but the slope term is the signed
    relative slope of v1/v2, which is what the aggregate-value landscape
    actually exposes. The two coincide whenever v1 is non-decreasing and
    v2 non-increasing; they differ when both curves slope the same way.
    """
    v1, v2 = pair.v1.value(q), pair.v2.value(q)
    if v1 <= 0.0 or v2 <= 0.0:
        raise SingularElasticity(f"valuation vanishes at q={q}")
    coeff = pair.v1.slope(q) / v1 - pair.v2.slope(q) / v2
    return _reaction_from_coeff(pair, advertiser, q, coeff)


def _reaction_from_coeff(pair: AdvertiserPair, advertiser: int, q: float, coeff: float) -> float:
    if advertiser == 1:
        v = pair.v1.value(q)
        if v <= 0.0:
            raise SingularElasticity(f"v1 vanishes at q={q}")
        mass = pair.tail1(q)
    elif advertiser == 2:
        v = pair.v2.value(q)
        if v <= 0.0:
            raise SingularElasticity(f"v2 vanishes at q={q}")
        mass = pair.head2(q)
    else:
        raise ValueError("advertiser must be 1 or 2")
    if not math.isfinite(mass):
        raise DivergentElasticity("remaining-value integral diverges")
    return 1.0 + coeff * mass / v


def mirrored_pair(v: ValuationSpec) -> AdvertiserPair:
    """Pair a monotone-increasing curve on [0,1] with its mirror image."""
    return AdvertiserPair(v1=v, v2=MirrorOf(v))
