"""Nullclines p_n(q): the curves on which J_n(q, p) vanishes.

The curve is traced as the solution of p' = DF(n, q, p) (the implicit
derivative of J_n = 0) from p(0) = 1/(n+1), using an embedded Dormand-Prince
5(4) pair. q = 0 is a removable singularity of DF, so integration starts at
a small q with the first-order Taylor value.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, NamedTuple, Optional, Tuple

import mpmath

from .model import GameParams
from .numerics import CoinDuelError


class SingularDenominator(CoinDuelError, ZeroDivisionError):
    pass


class StepFailure(CoinDuelError):
    pass


class NoIntersection(CoinDuelError):
    pass


# -- the lines bounding each nullcline ----------------------------------------

def _recip(k: int, like):
    """1/k in the number type of ``like`` (exact for rationals)."""
    if isinstance(like, mpmath.mpf):
        return mpmath.mpf(1) / k
    if isinstance(like, (int, Fraction)):
        return Fraction(1, k)
    return 1.0 / k


def line_L(k: int, q):
    """L_k(q) = 1/(2k+1) + q."""
    return _recip(2 * k + 1, q) + q


def line_M(n: int, q):
    """M_n(q) = 1/(n+1) + n q/(n+1)."""
    return (1 + n * q) * _recip(n + 1, q)


def line_K(n: int, q):
    """K_n(q) = 1/(n+1) + n q/(2(n+1))."""
    return _recip(n + 1, q) + n * q * _recip(2 * (n + 1), q)


def right_endpoint(n: int) -> Fraction:
    """q = n/(2n+1), where p_n meets the diagonal at p = (n+1)/(2n+1)."""
    return Fraction(n, 2 * n + 1)


def slope_limit(n: int) -> Fraction:
    """lim_{q -> 0+} p_n'(q) = n / (2(n+1))."""
    return Fraction(n, 2 * (n + 1))


# -- closed forms and derivative formulas -------------------------------------

def p1_closed(q):
    return (1 - q) / (2 - 3 * q)


def p2_closed(q):
    sqrt = mpmath.sqrt if isinstance(q, mpmath.mpf) else math.sqrt
    return (1 - q) * (2 - 4 * q - sqrt(1 - 4 * q + 6 * q * q)) / (3 - 12 * q + 10 * q * q)


def derivative_formula(n: int, q, p):
    """p(1-p)(np - nq + p - 1) / (q(1-q)(n(q-p) + q))."""
    den = q * (1 - q) * (n * (q - p) + q)
    if den == 0:
        raise SingularDenominator(f"derivative formula singular at q={q}, p={p}")
    return p * (1 - p) * (n * p - n * q + p - 1) / den


def inflection_polynomial(n: int, q, p):
    """The cubic Z(n, q, p) whose sign is the sign of p_n'' on the nullcline."""
    return (
        2 * n**3 * (p - q) ** 3
        + 2 * n**2 * (2 * p**3 - p**2 * (7 * q + 1) + p * q * (7 * q + 3) - 2 * q**2 * (q + 1))
        + n * (2 * p**3 - p**2 * (11 * q + 2) + p * q * (11 * q + 10) - q * (2 * q**2 + 7 * q + 1))
        - (p - 1) * q * (3 * p - 3 * q - 1)
    )


def second_derivative(n: int, q, p):
    """p(1-p)(1-p-q) Z / (q^2 (q-1)^2 (n(p-q) - q)^3)."""
    den = q**2 * (q - 1) ** 2 * (n * (p - q) - q) ** 3
    if den == 0:
        raise SingularDenominator(f"second derivative singular at q={q}, p={p}")
    return p * (1 - p) * (1 - p - q) * inflection_polynomial(n, q, p) / den


def second_derivative_limit(n: int) -> Fraction:
    """Conjectured value of p_n''(0+): (2n^2 + 5n + 2) / (6(n+1))."""
    return Fraction(2 * n * n + 5 * n + 2, 6 * (n + 1))


# -- direct root finding -------------------------------------------------------

def _bisect(fn, lo, hi, iters=200, tol=0.0):
    flo = fn(lo)
    for _ in range(iters):
        mid = (lo + hi) / 2
        if mid == lo or mid == hi or hi - lo <= tol:
            break
        fm = fn(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo + hi) / 2


def nullcline_point(n: int, q: float, digits: int = 30):
    """p_n(q) by bisection on the sign of J_n in p over (max(L_n, K_n), M_n).

    J_n(q, p) changes sign from + to - exactly once in this bracket; the
    sign is read off the rescaled ratio sequence at ``digits`` digits.
    """
    with mpmath.workdps(digits):
        q = mpmath.mpf(q)
        c_lo = max(line_L(n, q), line_K(n, q))
        c_hi = line_M(n, q)

        def positive_j(p):
            s = 1 - p - q
            c = 2 * p * q
            a = c
            for k in range(1, n + 1):
                a = ((2 * k + 1) * c + k * a * s / (s + a)) / (k + 1)
            return 2 * q - a  # > 0 iff J_n > 0

        return _bisect(positive_j, c_lo, c_hi, iters=4 * digits)


def inflection_point(n: int, q, digits: int = 30):
    """The unique real root p_n^-(q) of Z(n, q, .) in (q, 1 - q)."""
    with mpmath.workdps(digits):
        q = mpmath.mpf(q)
        lo, hi = q, 1 - q
        if inflection_polynomial(n, q, lo) * inflection_polynomial(n, q, hi) > 0:
            raise NoIntersection(f"inflection cubic has no root in (q, 1-q) at q={q}")
        return _bisect(lambda p: inflection_polynomial(n, q, p), lo, hi, iters=4 * digits)


# -- tracing -------------------------------------------------------------------

class TracePoint(NamedTuple):
    q: float
    p: float
    dp_dq: float


@dataclass
class NullclineTrace:
    n: int
    samples: List[TracePoint]
    domain: Tuple[float, float]
    steps: int = 0
    rejected: int = 0
    violations: List[str] = field(default_factory=list)
    endpoint: Tuple[Fraction, Fraction] = (Fraction(0), Fraction(0))

    def qs(self) -> List[float]:
        return [s.q for s in self.samples]

    def __call__(self, q: float) -> float:
        """Cubic Hermite interpolation between samples."""
        qs = self.qs()
        if not qs[0] <= q <= qs[-1]:
            raise ValueError(f"q={q} outside traced domain {self.domain}")
        i = min(max(bisect.bisect_right(qs, q) - 1, 0), len(qs) - 2)
        a, b = self.samples[i], self.samples[i + 1]
        h = b.q - a.q
        t = (q - a.q) / h
        h00 = (1 + 2 * t) * (1 - t) ** 2
        h10 = t * (1 - t) ** 2
        h01 = t * t * (3 - 2 * t)
        h11 = t * t * (t - 1)
        return h00 * a.p + h10 * h * a.dp_dq + h01 * b.p + h11 * h * b.dp_dq


# Dormand-Prince 5(4)
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = _A[6] + (0.0,)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_E = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))

START_Q = 1e-8
END_GAP = 1e-6


def trace_invariant_violations(n: int, q: float, p: float, slope: float, tol: float) -> List[str]:
    """Check one accepted point against the proved sandwich and slope window.

    ``tol`` absorbs differences that rounding cannot resolve (near q = 0 the
    curve and K_n agree to second order).
    """
    out = []
    lower_slope = n / (2 * (n + 1))
    if not q < p:
        out.append(f"p <= q at q={q}")
    if not p < line_M(n, q) + tol:
        out.append(f"p >= M_n at q={q}")
    if not p > line_L(n, q) - tol:
        out.append(f"p <= L_n at q={q}")
    if not p > line_K(n, q) - tol:
        out.append(f"p <= K_n at q={q}")
    if not lower_slope - tol < slope < 1 + tol:
        out.append(f"slope {slope} outside ({lower_slope}, 1) at q={q}")
    return out


def trace(
    n: int,
    step_control: float = 1e-12,
    q_end: Optional[float] = None,
    samples: Optional[int] = None,
    q_start: float = START_Q,
    max_steps: int = 200000,
) -> NullclineTrace:
    """Integrate p' = DF(n, q, p) from q_start to q_end.

    The local error estimate of every accepted step is at most
    ``step_control``. With ``samples`` the solution is reported on that many
    evenly spaced q values (steps are clipped to land on them); otherwise
    every accepted step is reported.
    """
    if n < 1:
        raise ValueError("n must be positive")
    q_right = n / (2 * n + 1)
    if q_end is None:
        q_end = q_right - END_GAP
    if not q_start < q_end <= q_right:
        raise ValueError(f"q_end must lie in ({q_start}, {q_right}]")
    if samples is not None and samples < 2:
        raise ValueError("samples must be at least 2")
    grid = None
    if samples is not None:
        grid = [q_start + (q_end - q_start) * i / (samples - 1) for i in range(samples)]
        grid[-1] = q_end

    def rhs(q, p):
        return derivative_formula(n, q, p)

    q = q_start
    p = 1 / (n + 1) + q_start * n / (2 * (n + 1))
    slope = rhs(q, p)
    out = [TracePoint(q, p, slope)]
    result = NullclineTrace(n, out, (q_start, q_end))
    result.endpoint = (Fraction(n, 2 * n + 1), Fraction(n + 1, 2 * n + 1))
    check_tol = max(100 * step_control, 1e-13)
    h = q_start
    next_out = 1
    steps = rejected = 0
    while q < q_end:
        target = grid[next_out] if grid is not None else q_end
        h = min(h, target - q)
        if h < 1e-300 or h < 1e-15 * q:
            raise StepFailure(f"step size underflow at q={q}")
        k = [slope]
        for i in range(1, 7):
            pi = p + h * sum(a * kj for a, kj in zip(_A[i], k))
            k.append(rhs(q + _C[i] * h, pi))
        p_new = p + h * sum(b * kj for b, kj in zip(_B5, k))
        err = abs(h * sum(e * kj for e, kj in zip(_E, k)))
        if err <= step_control:
            q = q + h
            if target - q <= 1e-15 * max(q, 1.0):
                q = target
            p = p_new
            slope = k[6]  # FSAL: the last stage is f at the new point
            steps += 1
            result.violations.extend(trace_invariant_violations(n, q, p, slope, check_tol))
            if grid is None:
                out.append(TracePoint(q, p, slope))
            elif q == target:
                out.append(TracePoint(q, p, slope))
                next_out += 1
            if steps > max_steps:
                raise StepFailure("too many steps")
        else:
            rejected += 1
        factor = 0.9 * (step_control / err) ** 0.2 if err > 0 else 5.0
        h = h * min(5.0, max(0.2, factor))
    result.steps = steps
    result.rejected = rejected
    return result


# -- intersections with the L lines --------------------------------------------

def q_minus_closed(n: int, j: int):
    """Closed-form q^-_{n,j} from the convexity lower bound."""
    root = mpmath.sqrt(mpmath.mpf(j * (j * j + j * (2 * n - 1) + (n - 1) ** 2)) / (j + 1))
    return (j + n - 1 - root) / (2 * j + 2 * n - 1)


def intersection_indices(n: int, j: int, indexing: str = "arcs") -> Tuple[int, int]:
    """(line index k, nullcline index m) defining q_{n,j}.

    ``"arcs"`` pairs L_{n+j-1} with p_{n+2j-1} (the pairing behind the closed
    form and the limit q_{inf,j}); ``"definition"`` pairs L_{n+j+1} with
    p_{n+2j-1} as literally stated alongside it.
    """
    if indexing == "arcs":
        return n + j - 1, n + 2 * j - 1
    if indexing == "definition":
        return n + j + 1, n + 2 * j - 1
    raise ValueError(f"unknown indexing {indexing!r}")


@dataclass(frozen=True)
class Intersection:
    n: int
    j: int
    q: float
    q_minus: float
    line: int
    curve: int


def q_intersection(n: int, j: int, indexing: str = "arcs", step_control: float = 1e-12) -> Intersection:
    """q where L_k meets p_m, bracketed on the traced nullcline p_m."""
    if n < 1 or j < 1:
        raise ValueError("n and j must be positive")
    k, m = intersection_indices(n, j, indexing)
    tr = trace(m, step_control)
    gaps = [s.p - float(line_L(k, s.q)) for s in tr.samples]
    idx = next((i for i in range(len(gaps) - 1) if (gaps[i] > 0) != (gaps[i + 1] > 0)), None)
    if idx is None:
        raise NoIntersection(f"L_{k} does not cross the traced p_{m}")
    lo, hi = tr.samples[idx].q, tr.samples[idx + 1].q
    q_star = _bisect(lambda x: tr(x) - line_L(k, x), lo, hi, iters=200)
    return Intersection(n, j, q_star, float(q_minus_closed(n, j)), k, m)


def delta(params: GameParams, optimal: Optional[int] = None) -> int:
    """Excess of N over floor(1/(2(p-q)) + 1/2), for points of T."""
    if params.slack <= 0:
        raise ValueError("delta is defined inside T (p + q < 1)")
    if optimal is None:
        from .optimizer import optimal_n

        optimal = optimal_n(params).N
    return optimal - math.floor(1 / (2 * params.gap) + Fraction(1, 2))
