"""Game parameters and the exact transforms x, y, z, u, rho."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .numerics import CoinDuelError, InvalidProbability, parse_probability


class DiagonalDomain(CoinDuelError, ValueError):
    """Raised when u or rho is requested on the line p + q = 1."""


@dataclass(frozen=True)
class GameParams:
    """Underdog heads probability ``q`` and favourite heads probability ``p``."""

    q: Fraction
    p: Fraction

    def __post_init__(self):
        q, p = Fraction(self.q), Fraction(self.p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)
        if not 0 < q < p < 1:
            raise InvalidProbability(f"need 0 < q < p < 1, got q={q}, p={p}")

    @classmethod
    def parse(cls, q: str, p: str) -> "GameParams":
        return cls(parse_probability(q), parse_probability(p))

    @property
    def gap(self) -> Fraction:
        return self.p - self.q

    @property
    def slack(self) -> Fraction:
        """1 - p - q; positive inside T, zero on the diagonal."""
        return 1 - self.p - self.q

    @property
    def region(self) -> "Region":
        s = self.slack
        return Region(in_triangle_T=s > 0, on_diagonal=s == 0)

    def __str__(self):
        return f"(q={self.q}, p={self.p})"


@dataclass(frozen=True)
class Region:
    in_triangle_T: bool
    on_diagonal: bool


@dataclass(frozen=True)
class Transform:
    params: GameParams

    @cached_property
    def x(self) -> Fraction:
        return self.params.p / (1 - self.params.p)

    @cached_property
    def y(self) -> Fraction:
        return self.params.q / (1 - self.params.q)

    @cached_property
    def z(self) -> Fraction:
        return self.x * self.y

    @cached_property
    def u(self) -> Fraction:
        s = self._slack()
        return 1 + 2 * self.params.p * self.params.q / s

    @cached_property
    def rho(self) -> Fraction:
        s = self._slack()
        return (1 - self.params.p + self.params.q) / s

    def _slack(self) -> Fraction:
        s = self.params.slack
        if s == 0:
            raise DiagonalDomain("u and rho are undefined on p + q = 1")
        return s


def transform(params: GameParams) -> Transform:
    return Transform(params)


def reflect(params: GameParams) -> GameParams:
    """(q, p) -> (1 - p, 1 - q); f and N are invariant under this map."""
    return GameParams(1 - params.p, 1 - params.q)


def reduce_to_triangle(params: GameParams) -> GameParams:
    """Reflect points with p + q > 1 into T; others are returned unchanged."""
    return reflect(params) if params.slack < 0 else params
