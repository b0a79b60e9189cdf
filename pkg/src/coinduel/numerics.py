"""Exact rationals, precision configuration and sign certification.

Probabilities enter the library as :class:`fractions.Fraction` values parsed
from decimal text, so that conditions like ``p + q == 1`` are decided exactly.
Approximate evaluation happens in :mod:`mpmath` at a caller-chosen number of
decimal digits; :func:`certify_sign` wraps any such evaluation in a
precision-escalation loop.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Callable, Tuple

import mpmath

Rational = Fraction

DOUBLE_DIGITS = 15


class CoinDuelError(Exception):
    """Base class for all errors raised by this package."""


class InvalidProbability(CoinDuelError, ValueError):
    pass


class UncertifiedSign(CoinDuelError):
    """The error bound still straddles zero at the maximum precision."""

    def __init__(self, message: str, digits: int = 0):
        super().__init__(message)
        self.digits = digits


class Sign(enum.IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1

    @classmethod
    def of(cls, value) -> "Sign":
        if value > 0:
            return cls.POSITIVE
        if value < 0:
            return cls.NEGATIVE
        return cls.ZERO


class Method(str, enum.Enum):
    EXACT_RATIONAL = "exact-rational"
    HIGH_PRECISION_RECURRENCE = "high-precision-recurrence"
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class PrecisionConfig:
    working_digits: int = 30
    max_digits: int = 4000
    escalation_factor: int = 2

    def __post_init__(self):
        if self.working_digits < 1 or self.max_digits < 1:
            raise ValueError("digit counts must be positive")
        if self.working_digits > self.max_digits:
            raise ValueError("working_digits exceeds max_digits")
        if self.escalation_factor < 2:
            raise ValueError("escalation_factor must be at least 2")

    def with_working(self, digits: int) -> "PrecisionConfig":
        digits = max(1, int(digits))
        return PrecisionConfig(digits, max(self.max_digits, digits), self.escalation_factor)

    def schedule(self):
        """Yield the digit counts tried by the escalation loop."""
        digits = self.working_digits
        while True:
            yield digits
            if digits >= self.max_digits:
                return
            digits = min(self.max_digits, digits * self.escalation_factor)


@dataclass(frozen=True)
class CertifiedSign:
    sign: Sign
    method: Method
    digits_used: int = 0

    def __post_init__(self):
        exact = self.method is Method.EXACT_RATIONAL
        if exact != (self.digits_used == 0):
            raise ValueError("digits_used must be 0 exactly for exact-rational signs")
        if self.sign is Sign.ZERO and not exact:
            raise ValueError("only exact evaluation may report a zero sign")

    @classmethod
    def exact(cls, value) -> "CertifiedSign":
        return cls(Sign.of(value), Method.EXACT_RATIONAL, 0)


_DECIMAL_RE = re.compile(r"^[+]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")
_FRACTION_RE = re.compile(r"^\s*(\d+)\s*/\s*(\d+)\s*$")


def parse_probability(text: str) -> Fraction:
    """Parse ``"0.18"``, ``"1e-100"`` or ``"1/3"`` into an exact fraction in (0, 1)."""
    if not isinstance(text, str):
        raise InvalidProbability(f"expected a string, got {type(text).__name__}")
    s = text.strip()
    m = _FRACTION_RE.match(s)
    if m:
        num, den = int(m.group(1)), int(m.group(2))
        if den == 0:
            raise InvalidProbability(f"zero denominator in {text!r}")
        value = Fraction(num, den)
    elif _DECIMAL_RE.match(s):
        try:
            value = Fraction(Decimal(s))
        except (InvalidOperation, ValueError) as exc:
            raise InvalidProbability(f"malformed probability {text!r}") from exc
    else:
        raise InvalidProbability(f"malformed probability {text!r}")
    if not 0 < value < 1:
        raise InvalidProbability(f"probability {text!r} is not in (0, 1)")
    return value


def format_probability(value: Fraction) -> str:
    """Inverse of :func:`parse_probability`: decimal text when the
    denominator divides a power of ten, ``a/b`` otherwise."""
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    k = max(twos, fives)
    scaled = value * 10**k
    assert scaled.denominator == 1
    digits = str(abs(scaled.numerator)).rjust(k + 1, "0")
    sign = "-" if value < 0 else ""
    if k == 0:
        return sign + digits
    return f"{sign}{digits[:-k]}.{digits[-k:]}"


def to_mpf(value):
    """Round an exact rational (or int) to an mpf at the current precision."""
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value)


def certify_sign(
    evaluator: Callable[[int], Tuple[object, object]],
    cfg: PrecisionConfig,
    method: Method = Method.HIGH_PRECISION_RECURRENCE,
) -> CertifiedSign:
    """Escalate precision until ``|value| > error`` for ``evaluator(digits)``.

    The evaluator returns ``(value, error_bound)`` computed with ``digits``
    significant decimal digits. Zero is never returned from this path.
    """
    last = 0
    for digits in cfg.schedule():
        value, err = evaluator(digits)
        last = digits
        if abs(value) > err:
            return CertifiedSign(Sign.POSITIVE if value > 0 else Sign.NEGATIVE, method, digits)
    raise UncertifiedSign(
        f"sign not certified within {cfg.max_digits} digits ({method.value})", last
    )
