"""Win probability f(n) for moderate and large n.

Uses f(n) = (1 - s^n P_n(u) - (p - q) sum_{k<n} s^k P_k(u)) / 2 with
s = 1 - p - q, driven by the three-term recurrence for

    Y_n = 1/s + sum_{k<n} s^k P_k(u),

so that s^n P_n(u) = Y_{n+1} - Y_n and the sum is Y_n - 1/s.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Optional, TextIO

import mpmath

from .model import DiagonalDomain, GameParams
from .numerics import CoinDuelError, PrecisionConfig, to_mpf


class PrecisionExhausted(CoinDuelError):
    pass


F_SERIES_CAP = 10**6


@dataclass(frozen=True)
class YState:
    """Y_n together with the two previous values."""

    n: int
    y: object
    y1: object
    y2: object

    @classmethod
    def seed(cls, params: GameParams, number=Fraction) -> "YState":
        """Y_1 with Y_0 = 1/s and Y_{-1} = 0."""
        s = params.slack
        if s == 0:
            raise DiagonalDomain("the Y recurrence divides by 1 - p - q")
        conv = Fraction if number is Fraction else to_mpf
        y0 = conv(1 / s)
        return cls(1, conv(Fraction(1)) + y0, y0, conv(Fraction(0)))


def _coefficients(params: GameParams, n: int, conv):
    p, q = params.p, params.q
    c1 = 3 * p + 3 * q - 6 * p * q - 4 + n * (3 - 2 * p - 2 * q + 4 * p * q)
    c2 = 7 * p - 2 * p * p + 7 * q - 10 * p * q - 2 * q * q - 5 + n * (
        3 - 4 * p + p * p - 4 * q + 6 * p * q + q * q
    )
    c3 = (n - 2) * (1 - p - q) ** 2
    return conv(c1), conv(c2), conv(c3)


def y_advance(state: YState, params: GameParams) -> YState:
    """(n-1) Y_n = c1 Y_{n-1} - c2 Y_{n-2} + (n-2) s^2 Y_{n-3}, for n >= 2."""
    n = state.n + 1
    if n < 2:
        raise ValueError("advance from Y_1 or later")
    exact = isinstance(state.y, Fraction)
    conv = Fraction if exact else to_mpf
    c1, c2, c3 = _coefficients(params, n, conv)
    y = (c1 * state.y - c2 * state.y1 + c3 * state.y2) / (n - 1)
    return YState(n, y, state.y, state.y1)


def y_values(params: GameParams, n_max: int, number=Fraction) -> list:
    """[Y_0, ..., Y_{n_max}]."""
    state = YState.seed(params, number)
    out = [state.y1, state.y]
    while state.n < n_max:
        state = y_advance(state, params)
        out.append(state.y)
    return out[: n_max + 1]


class WinProbValue(NamedTuple):
    n: int
    f: object
    abs_error: float


@dataclass(frozen=True)
class WinProbSeries:
    params: GameParams
    values: List[WinProbValue]
    digits: int

    def argmax(self) -> int:
        """Smallest n >= 1 with the largest f(n)."""
        best = max(v.f for v in self.values[1:])
        return next(v.n for v in self.values[1:] if v.f == best)

    def floats(self) -> List[float]:
        return [float(v.f) for v in self.values]

    def write_csv(self, fh: TextIO, digits: int = 20) -> None:
        writer = csv.writer(fh)
        writer.writerow(["n", "f", "abs_error", "is_argmax"])
        top = self.argmax()
        for v in self.values:
            writer.writerow([v.n, mpmath.nstr(v.f, digits), f"{v.abs_error:.3e}", int(v.n == top)])


def default_digits(params: GameParams, n_max: int) -> int:
    """30 guard digits plus n_max |log10(1 - p - q)|."""
    s = abs(params.slack)
    return 30 + math.ceil(n_max * abs(math.log10(s)))


def _f_from_y(params: GameParams, ys: list, digits: int) -> list:
    with mpmath.workdps(digits):
        d = to_mpf(params.gap)
        inv_s = to_mpf(1 / params.slack)
        out = []
        for n in range(len(ys) - 1):
            out.append((1 - (ys[n + 1] - ys[n]) - d * (ys[n] - inv_s)) / 2)
        return out


def f_series(
    params: GameParams, n_max: int, cfg: PrecisionConfig | None = None, tolerance: Optional[float] = None
) -> WinProbSeries:
    """f(0..n_max) with per-entry error estimates.

    Each value is computed at two precisions ten digits apart; their
    difference plus one unit in the last retained place is the reported
    error. Precision escalates until every error is below ``tolerance``
    (default 10^-(working digits - 10)).
    """
    if params.slack == 0:
        raise DiagonalDomain("use exact_oracle.brute_force_f on p + q = 1")
    if n_max < 0 or n_max > F_SERIES_CAP:
        raise ValueError(f"n_max must be in [0, {F_SERIES_CAP}]")
    start = default_digits(params, n_max)
    if cfg is None:
        cfg = PrecisionConfig(start, max(4 * start, 4000))
    else:
        cfg = cfg.with_working(max(cfg.working_digits, start))
    tol = tolerance if tolerance is not None else 10.0 ** (-(cfg.working_digits - 10))
    for digits in cfg.schedule():
        vals = []
        for dd in (digits, digits + 10):
            with mpmath.workdps(dd):
                ys = y_values(params, n_max + 1, number=mpmath.mpf)
            vals.append(_f_from_y(params, ys, dd))
        with mpmath.workdps(digits + 10):
            errs = [float(abs(a - b) + mpmath.mpf(10) ** (-digits)) for a, b in zip(*vals)]
        if max(errs) <= tol:
            values = [WinProbValue(n, vals[1][n], errs[n]) for n in range(n_max + 1)]
            return WinProbSeries(params, values, digits)
    raise PrecisionExhausted(f"f_series did not reach {tol:g} within {cfg.max_digits} digits")
