"""Certified sign of the indicator J_n(q, p) for any n >= 0.

Strategies, in dispatch order:

* exact      -- diagonal closed form, or y phi_n(z) - psi_n(z) over the rationals;
* recurrence -- the rescaled ratio sequence a_n = (1-p-q)(r_n(u) - 1), first in
  compiled double precision, then in mpmath with escalating digits;
* quadrature -- the sign of int_0^pi R(t)^n w(t) dt where R = g(t)/g(0) and
  w = 2q(1-p) - S cos t, S = 2 sqrt(pq(1-p)(1-q)). This single integral is a
  positive multiple of (1-p+q) P_n(u) - (1-p-q) P_{n+1}(u).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import kernels
from .exact_oracle import exact_indicator
from .legendre import concentration_breakpoints, integrate_panels
from .model import GameParams, reduce_to_triangle
from .numerics import (
    DOUBLE_DIGITS,
    CertifiedSign,
    Method,
    PrecisionConfig,
    Sign,
    certify_sign,
    to_mpf,
)

log = logging.getLogger(__name__)

EXACT_CUTOFF = 500
RECURRENCE_CUTOFF = 10**7
STRATEGIES = ("exact", "recurrence", "quadrature")


@dataclass(frozen=True)
class IndicatorQuery:
    params: GameParams
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")


def diagonal_indicator_sign(q: Fraction, n: int) -> Sign:
    """On p + q = 1, J_n = (q/(1-q) - n/(n+1)) C(2n, n)."""
    return Sign.of(Fraction(q) / (1 - Fraction(q)) - Fraction(n, n + 1))


def exact_sign(params: GameParams, n: int) -> CertifiedSign:
    if params.slack == 0:
        return CertifiedSign.exact(diagonal_indicator_sign(params.q, n))
    return CertifiedSign.exact(exact_indicator(params, n))


def _double_inputs(params: GameParams):
    p, q = params.p, params.q
    return float(2 * p * q), float(params.slack), float(2 * q)


def recurrence_evaluator(params: GameParams, n: int):
    """Evaluator for :func:`certify_sign`: returns ``(a_{n+1} - 2q, bound)``."""
    p, q, s = params.p, params.q, params.slack

    def evaluate(digits: int):
        with mpmath.workdps(digits + 5):
            c = to_mpf(2 * p * q)
            sm = to_mpf(s)
            a = c
            for k in range(1, n + 1):
                a = ((2 * k + 1) * c + k * a * sm / (sm + a)) / (k + 1)
            two_q = to_mpf(2 * q)
            rel = 2 * (8 * (n + 2) + 3) * mpmath.eps
            return a - two_q, rel * max(a, two_q)

    return evaluate


def recurrence_sign(params: GameParams, n: int, cfg: PrecisionConfig) -> CertifiedSign:
    """J_n > 0 iff a_{n+1} < 2q (inside T)."""
    c, s, two_q = _double_inputs(params)
    quick = kernels.indicator_sign(c, s, two_q, n, 3 * kernels.UNIT_ROUNDOFF)
    if quick:
        return CertifiedSign(Sign(quick), Method.HIGH_PRECISION_RECURRENCE, DOUBLE_DIGITS)
    res = certify_sign(recurrence_evaluator(params, n), _near_diagonal(params, cfg))
    # a_{n+1} - 2q has the opposite sign of J_n
    return CertifiedSign(Sign(-res.sign), res.method, res.digits_used)


def quadrature_evaluator(params: GameParams, n: int):
    """Evaluator returning ``(I_n, bound)`` with I_n a positive multiple of J_n."""
    p, q = params.p, params.q

    def evaluate(digits: int):
        with mpmath.workdps(digits + 10):
            pm, qm = to_mpf(p), to_mpf(q)
            big_s = 2 * mpmath.sqrt(pm * qm * (1 - pm) * (1 - qm))
            a = to_mpf(params.slack + 2 * p * q)
            k = big_s / (a + big_s)
            w0 = 2 * qm * (1 - pm)
            big_n = mpmath.mpf(n)
            cutoff = (digits + 10) * mpmath.log(10)
            pts, t_max = concentration_breakpoints(big_n, k, cutoff)

            def integrand(t):
                r = mpmath.exp(big_n * mpmath.log1p(-2 * k * mpmath.sin(t / 2) ** 2))
                return r * (w0 - big_s * mpmath.cos(t))

            scale = mpmath.pi * (w0 + big_s)
            val, qerr = integrate_panels(integrand, pts, scale * mpmath.mpf(10) ** (-digits))
            trunc = (mpmath.pi - t_max) * mpmath.exp(-cutoff) * (w0 + big_s)
            rounding = scale * 20 * mpmath.eps
            return val, qerr + trunc + rounding

    return evaluate


def quadrature_sign(params: GameParams, n: int, cfg: PrecisionConfig) -> CertifiedSign:
    return certify_sign(quadrature_evaluator(params, n), _near_diagonal(params, cfg), Method.QUADRATURE)


def _near_diagonal(params: GameParams, cfg: PrecisionConfig) -> PrecisionConfig:
    """Start with more digits when 1 - p - q is tiny relative to the precision."""
    s = abs(params.slack)
    digits = cfg.working_digits
    if s and s < Fraction(1, 10 ** (digits // 2)):
        lost = len(str(s.denominator)) - len(str(s.numerator))
        return cfg.with_working(digits + lost)
    return cfg


def indicator_sign(
    query: IndicatorQuery,
    cfg: PrecisionConfig = PrecisionConfig(),
    *,
    strategy: str | None = None,
    exact_cutoff: int = EXACT_CUTOFF,
    recurrence_cutoff: int = RECURRENCE_CUTOFF,
) -> CertifiedSign:
    """Certified sign of J_n(q, p).

    ``strategy`` forces one of ``"exact"``, ``"recurrence"``, ``"quadrature"``;
    by default the cheapest applicable one is used. The diagonal is always
    decided exactly and points with p + q > 1 are reflected into T.
    """
    params, n = query.params, query.n
    if strategy is not None and strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if params.slack == 0:
        return exact_sign(params, n)
    params = reduce_to_triangle(params)
    if strategy is None:
        if n <= exact_cutoff:
            strategy = "exact"
        elif n <= recurrence_cutoff:
            strategy = "recurrence"
        else:
            strategy = "quadrature"
    if strategy == "exact":
        return exact_sign(params, n)
    if strategy == "recurrence":
        return recurrence_sign(params, n, cfg)
    return quadrature_sign(params, n, cfg)


def sign_of(params: GameParams, n: int, cfg: PrecisionConfig = PrecisionConfig(), **kw) -> CertifiedSign:
    return indicator_sign(IndicatorQuery(params, n), cfg, **kw)
