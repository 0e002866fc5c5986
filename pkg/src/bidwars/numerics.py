"""Shared quadrature and root-finding kernels with fixed tolerances.

Everything here is deterministic: identical inputs produce bit-identical
outputs, so reports built on top of these kernels are stable across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List

from scipy.optimize import brentq

from .errors import BracketError, QuadratureError

__all__ = ["NumericsConfig", "DEFAULT_NUMERICS", "integrate", "find_root", "find_all_roots"]


@dataclass(frozen=True)
class NumericsConfig:
    quad_abs_tol: float = 1e-10
    root_abs_tol: float = 1e-12
    max_iter: int = 200
    grid_fallback_points: int = 4096

    def __post_init__(self) -> None:
        if self.quad_abs_tol <= 0 or self.root_abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_iter < 10:
            raise ValueError("max_iter must be at least 10")
        if self.grid_fallback_points < 2:
            raise ValueError("grid_fallback_points must be at least 2")


DEFAULT_NUMERICS = NumericsConfig()

# Recursion cap for adaptive Simpson; 2^50 subintervals is far beyond any
# smooth integrand's needs, so hitting it signals a genuinely bad integrand.
_MAX_DEPTH = 50


def _simpson(f: Callable[[float], float], a: float, fa: float, b: float, fb: float):
    m = 0.5 * (a + b)
    fm = f(m)
    return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive(f, a, fa, b, fb, m, fm, whole, tol, depth):
    lm, flm, left = _simpson(f, a, fa, m, fm)
    rm, frm, right = _simpson(f, m, fm, b, fb)
    err = (left + right - whole) / 15.0
    if abs(err) <= tol or (b - a) <= 1e-14 * max(1.0, abs(a) + abs(b)):
        return left + right + err
    if depth >= _MAX_DEPTH:
        raise QuadratureError(f"adaptive quadrature did not converge on [{a}, {b}]")
    half = 0.5 * tol
    return _adaptive(f, a, fa, m, fm, lm, flm, left, half, depth + 1) + _adaptive(
        f, m, fm, b, fb, rm, frm, right, half, depth + 1
    )


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    config: NumericsConfig = DEFAULT_NUMERICS,
) -> float:
    """Adaptive-Simpson integral of a continuous f over [a, b].

    The interval-doubling error estimate keeps the absolute error below
    ``config.quad_abs_tol``. Families with closed antiderivatives bypass
    this routine entirely (see the valuation module).
    """
    if b < a:
        raise ValueError("integration requires a <= b")
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    m, fm, whole = _simpson(f, a, fa, b, fb)
    return _adaptive(f, a, fa, b, fb, m, fm, whole, config.quad_abs_tol, 0)


def find_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    config: NumericsConfig = DEFAULT_NUMERICS,
) -> float:
    """Root of f inside [lo, hi], which must bracket a sign change.

    Brent's method (scipy.optimize.brentq): guaranteed convergence for a
    bracketing interval, final bracket width <= config.root_abs_tol.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise BracketError(f"no sign change on [{lo}, {hi}]: f(lo)={flo:g}, f(hi)={fhi:g}")
    return float(brentq(f, lo, hi, xtol=config.root_abs_tol, maxiter=config.max_iter))


def find_all_roots(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    n_subdiv: int = 64,
    config: NumericsConfig = DEFAULT_NUMERICS,
) -> List[float]:
    """All roots found by scanning n_subdiv subintervals for sign changes.

    Roots at scan nodes are kept directly; each sign-changing subinterval
    is refined with find_root. Returns a sorted, de-duplicated list (an
    empty list when f never changes sign).
    """
    if n_subdiv < 2:
        raise ValueError("n_subdiv must be at least 2")
    xs = [lo + (hi - lo) * i / n_subdiv for i in range(n_subdiv + 1)]
    fs = [f(x) for x in xs]
    roots: List[float] = []
    for i in range(n_subdiv):
        f0, f1 = fs[i], fs[i + 1]
        if f0 == 0.0:
            roots.append(xs[i])
        elif f0 * f1 < 0.0:
            roots.append(find_root(f, xs[i], xs[i + 1], config))
    if fs[-1] == 0.0:
        roots.append(xs[-1])
    roots.sort()
    dedup: List[float] = []
    min_gap = max(config.root_abs_tol * 10.0, 1e-13 * (abs(hi - lo) + 1.0))
    for r in roots:
        if not dedup or not math.isclose(r, dedup[-1], abs_tol=min_gap):
            dedup.append(r)
    return dedup
