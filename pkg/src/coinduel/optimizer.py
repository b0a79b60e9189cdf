"""The optimal game length N(q, p): the least n >= 1 with J_n(q, p) <= 0."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List

from .bounds import BoundSet, bound_set, diagonal_n
from .indicator import EXACT_CUTOFF, RECURRENCE_CUTOFF, IndicatorQuery, indicator_sign
from .model import GameParams, reduce_to_triangle
from .numerics import CertifiedSign, Method, PrecisionConfig, Sign

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Probe:
    n: int
    sign: Sign
    method: Method
    digits: int


@dataclass(frozen=True)
class OptimalResult:
    N: int
    bounds: BoundSet
    method_trace: List[Probe] = field(default_factory=list)
    tie: bool = False
    reflected: bool = False

    @property
    def probes(self) -> int:
        return len(self.method_trace)


def auto_precision(upper: int, base: PrecisionConfig | None = None) -> PrecisionConfig:
    """Working digits of about 2 log10(upper) + 30."""
    digits = 2 * len(str(max(upper, 1))) + 30
    if base is None:
        return PrecisionConfig(digits, max(4000, 8 * digits))
    return base.with_working(max(base.working_digits, digits))


def optimal_n(
    params: GameParams,
    cfg: PrecisionConfig | None = None,
    *,
    exact_cutoff: int = EXACT_CUTOFF,
    recurrence_cutoff: int = RECURRENCE_CUTOFF,
) -> OptimalResult:
    """N(q, p) with ties resolved to the smaller length.

    Uses the diagonal closed form on p + q = 1, reflects p + q > 1 into T,
    and otherwise bisects the monotone predicate "J_n <= 0" between the best
    analytic lower and upper bounds.
    """
    bounds = bound_set(params)
    if params.slack == 0:
        n = diagonal_n(params.q)
        tie = params.q / (1 - 2 * params.q) == n
        return OptimalResult(n, bounds, [], tie)
    reflected = params.slack < 0
    t = reduce_to_triangle(params)
    if cfg is None:
        cfg = auto_precision(bounds.upper)

    trace: List[Probe] = []

    def probe(n: int) -> CertifiedSign:
        res = indicator_sign(
            IndicatorQuery(t, n), cfg, exact_cutoff=exact_cutoff, recurrence_cutoff=recurrence_cutoff
        )
        trace.append(Probe(n, res.sign, res.method, res.digits_used))
        log.debug("J_%d: %s via %s at %d digits", n, res.sign.name, res.method.value, res.digits_used)
        return res

    lo = bounds.lower - 1  # J_lo > 0 is implied by N >= lower
    hi = bounds.upper  # J_hi <= 0 is implied by N <= upper
    hi_sign = None
    while hi - lo > 1:
        mid = (lo + hi) // 2
        s = probe(mid).sign
        if s <= 0:
            hi, hi_sign = mid, s
        else:
            lo = mid
    if hi_sign is None:
        # the upper bound was never probed; its sign decides the tie flag
        hi_sign = probe(hi).sign
    return OptimalResult(hi, bounds, trace, hi_sign is Sign.ZERO, reflected)


def bisection_budget(bounds: BoundSet) -> int:
    """Worst-case number of probes: ceil(log2(U - L + 1)) + 2."""
    width = bounds.upper - bounds.lower + 1
    return math.ceil(math.log2(max(width, 1))) + 2
