"""Analytic bounds and approximations for the optimal game length N(q, p).

All floors and ceilings are taken on exact fractions; the quadratic roots
behind the improved bounds are located with integer square roots and then
checked against the quadratic itself, so no ceiling is ever off by one.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional, Tuple

import mpmath

from .model import GameParams, reduce_to_triangle
from .numerics import CoinDuelError


class NoRealRoot(CoinDuelError, ArithmeticError):
    pass


def _floor(x: Fraction) -> int:
    return math.floor(x)


def _ceil(x: Fraction) -> int:
    return math.ceil(x)


def diagonal_n(q: Fraction) -> int:
    """N(q, 1-q) = ceil(q / (1 - 2q)) for 0 < q < 1/2."""
    q = Fraction(q)
    if not 0 < q < Fraction(1, 2):
        raise ValueError("diagonal formula needs 0 < q < 1/2")
    return _ceil(q / (1 - 2 * q))


def simple_bounds(params: GameParams) -> Tuple[int, int]:
    d = params.gap
    half = Fraction(1, 2)
    if params.slack == 0:
        lower = _floor(1 / (2 * d) - half)
    else:
        lower = _floor(1 / (2 * d) + half)
    upper = _ceil(max(1 - params.p, params.q) / d)
    return lower, upper


def linear_lower(params: GameParams) -> int:
    p, q = params.p, params.q
    return _ceil((1 - p) / (p - q / 2))


def ceil_positive_root(a: Fraction, b: Fraction, c: Fraction) -> int:
    """Exact ceiling of (-b + sqrt(b^2 - 4ac)) / (2a) for a > 0."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if a <= 0:
        raise ValueError("leading coefficient must be positive")
    scale = math.lcm(a.denominator, b.denominator, c.denominator)
    A, B, C = int(a * scale), int(b * scale), int(c * scale)
    disc = B * B - 4 * A * C
    if disc < 0:
        raise NoRealRoot(f"negative discriminant for {a}n^2 + {b}n + {c}")

    def at_or_above(m: int) -> bool:
        # m >= root  <=>  2Am + B >= sqrt(disc)
        t = 2 * A * m + B
        return t >= 0 and t * t >= disc

    m = -((B - math.isqrt(disc)) // (2 * A))  # ceil((-B + isqrt) / 2A)
    while not at_or_above(m):
        m += 1
    while at_or_above(m - 1):
        m -= 1
    return m


def lower_quadratic(params: GameParams) -> Tuple[Fraction, Fraction, Fraction]:
    """Coefficients of the convexity quadratic whose root gives N-."""
    p, q = params.p, params.q
    d = p - q
    return (
        2 * d**3,
        2 * (p * p - 3 * p * q - p + q * q + 2 * q) * d,
        -(1 - p) * q * (1 - 3 * p + 3 * q),
    )


def upper_quadratic(params: GameParams) -> Tuple[Fraction, Fraction, Fraction]:
    """The slope condition p_n'(q) = n / (2(n+1)) with denominators cleared:
    2(n+1) p(1-p)(n d + p - 1) = n q(1-q)(q - n d), d = p - q."""
    p, q = params.p, params.q
    d = p - q
    pp = p * (1 - p)
    return (
        2 * pp * d + d * q * (1 - q),
        2 * pp * (d + p - 1) - q * q * (1 - q),
        2 * pp * (p - 1),
    )


def improved_bounds(params: GameParams) -> Tuple[int, int]:
    if params.slack <= 0:
        raise ValueError("improved bounds are stated inside T (p + q < 1)")
    n_minus = max(0, ceil_positive_root(*lower_quadratic(params)))
    n_plus = max(0, ceil_positive_root(*upper_quadratic(params)))
    return n_minus, n_plus


def h_approx(params: GameParams) -> int:
    """ceil(1/(2(p-q)) - 3/2 + 1/(4p(1-p))); an approximation, not a bound."""
    p, d = params.p, params.gap
    return _ceil(1 / (2 * d) - Fraction(3, 2) + 1 / (4 * p * (1 - p)))


def delta_cap(params: GameParams) -> int:
    """floor(1/(2(p-q)) + 1/2) + ceil((1-2q)^2 / (4q(1-q))).

    Valid only below an unquantified line near the diagonal p = q, so this
    is exposed for experiments and never treated as a bound.
    """
    p, q = params.p, params.q
    return _floor(1 / (2 * (p - q)) + Fraction(1, 2)) + _ceil((1 - 2 * q) ** 2 / (4 * q * (1 - q)))


def q_infinity(j: int, digits: int = 30):
    """(1 - sqrt(j/(j+1))) / 2, the limit point of the j-th arc."""
    if j < 1:
        raise ValueError("j must be positive")
    with mpmath.workdps(digits):
        return (1 - mpmath.sqrt(mpmath.mpf(j) / (j + 1))) / 2


@dataclass(frozen=True)
class BoundSet:
    lower_simple: int
    lower_simple_strict: Optional[int]
    lower_linear: Optional[int]
    lower_improved: Optional[int]
    upper_simple: int
    upper_improved: Optional[int]
    h_approx: Optional[int]
    delta_cap: Optional[int]
    delta_cap_conditional: bool = True

    @property
    def lower(self) -> int:
        return max(
            v
            for v in (self.lower_simple, self.lower_simple_strict, self.lower_linear, self.lower_improved)
            if v is not None
        )

    @property
    def upper(self) -> int:
        return min(v for v in (self.upper_simple, self.upper_improved) if v is not None)

    @property
    def combined_lower(self) -> int:
        """max of the strict simple bound and the linear bound."""
        vals = [v for v in (self.lower_simple_strict, self.lower_linear) if v is not None]
        return max(vals) if vals else self.lower_simple

    def as_dict(self) -> dict:
        return asdict(self)


def bound_set(params: GameParams) -> BoundSet:
    """Every bound for (q, p); points with p + q > 1 are reflected first.

    On the diagonal only the simple bounds apply, and the strict, linear and
    improved fields are ``None``.
    """
    t = reduce_to_triangle(params)
    lower_w = _floor(1 / (2 * t.gap) - Fraction(1, 2))
    _, upper = simple_bounds(t)
    if t.slack == 0:
        return BoundSet(lower_w, None, None, None, upper, None, None, None)
    n_minus, n_plus = improved_bounds(t)
    return BoundSet(
        lower_simple=lower_w,
        lower_simple_strict=lower_w + 1,
        lower_linear=linear_lower(t),
        lower_improved=n_minus,
        upper_simple=upper,
        upper_improved=n_plus,
        h_approx=h_approx(t),
        delta_cap=delta_cap(t),
    )
