"""Legendre polynomials P_n(u) for u >= 1 in the three forms used here:
the three-term recurrence, the ratio recurrence, and the integral
representation (1/pi) int_0^pi (u + sqrt(u^2-1) cos t)^n dt.

The integral form is evaluated as a scaled mantissa times exp(log_scale), so
n may be far beyond machine range.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence, Tuple

import mpmath

from .exact_oracle import phi_exact, psi_exact
from .numerics import CoinDuelError, PrecisionConfig, to_mpf


class QuadratureFailure(CoinDuelError):
    pass


class Approx(NamedTuple):
    value: object
    error: object


def legendre_p(n: int, u, digits: int | None = None) -> Approx:
    """P_n(u) by the three-term recurrence.

    Exact (error 0) for int/Fraction ``u``. Otherwise evaluated in mpmath at
    ``digits`` (default: current precision) with a running first-order
    absolute error bound.
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    if isinstance(u, (int, Fraction)):
        u = Fraction(u)
        prev, cur = Fraction(1), u
        if n == 0:
            return Approx(prev, Fraction(0))
        for k in range(1, n):
            prev, cur = cur, ((2 * k + 1) * u * cur - k * prev) / (k + 1)
        return Approx(cur, Fraction(0))
    with mpmath.workdps(digits or mpmath.mp.dps):
        eps = mpmath.eps
        u = mpmath.mpf(u)
        prev, cur = mpmath.mpf(1), u
        e_prev, e_cur = mpmath.mpf(0), abs(u) * eps
        if n == 0:
            return Approx(+prev, mpmath.mpf(0))
        for k in range(1, n):
            a = (2 * k + 1) * u * cur
            b = k * prev
            nxt = (a - b) / (k + 1)
            e_nxt = ((2 * k + 1) * abs(u) * e_cur + k * e_prev) / (k + 1)
            e_nxt += 4 * eps * (abs(a) + abs(b)) / (k + 1)
            prev, cur, e_prev, e_cur = cur, nxt, e_cur, e_nxt
        return Approx(+cur, +e_cur)


@dataclass(frozen=True)
class LegendreRatioState:
    """r_n = P_n(u) / P_{n-1}(u) at degree ``n``."""

    n: int
    r: object
    u: object

    @classmethod
    def start(cls, u) -> "LegendreRatioState":
        return cls(1, u, u)


def ratio_advance(state: LegendreRatioState) -> LegendreRatioState:
    """r_{n+1} = (2n+1) u / (n+1) - n / ((n+1) r_n)."""
    n, r, u = state.n, state.r, state.u
    if r == 0:
        raise ZeroDivisionError("ratio state is zero")
    if isinstance(r, (int, Fraction)) and isinstance(u, (int, Fraction)):
        nxt = Fraction(2 * n + 1, n + 1) * u - Fraction(n, n + 1) / r
    else:
        nxt = (2 * n + 1) * u / (n + 1) - n / ((n + 1) * r)
    return LegendreRatioState(n + 1, nxt, u)


def phi(n: int, z):
    """sum_r C(n,r)^2 z^r."""
    if isinstance(z, (int, Fraction)):
        return phi_exact(n, Fraction(z))
    total, term = 0, 1
    for r in range(n + 1):
        total += term
        # C(n,r+1)^2 / C(n,r)^2 = ((n-r)/(r+1))^2
        term = term * z * (n - r) * (n - r) / ((r + 1) * (r + 1))
    return total


def psi(n: int, z):
    """sum_r C(n,r+1) C(n,r) z^(r+1) = (phi_{n+1} - (1+z) phi_n) / 2."""
    if isinstance(z, (int, Fraction)):
        return psi_exact(n, Fraction(z))
    total = 0
    term = n * z  # C(n,1) C(n,0) z
    for r in range(n):
        total += term
        # ratio of consecutive terms: C(n,r+2)C(n,r+1) / (C(n,r+1)C(n,r)) * z
        term = term * z * (n - r - 1) * (n - r) / ((r + 2) * (r + 1))
    return total


# -- adaptive panel quadrature ------------------------------------------------

def integrate_panels(
    f: Callable,
    points: Sequence,
    panel_tol,
    max_depth: int = 10,
) -> Tuple[object, object]:
    """Gauss-Legendre on each panel, bisecting panels whose error estimate
    exceeds ``panel_tol`` scaled by the panel's share of the total span.

    Returns ``(value, error_estimate)``; the estimate is inflated by a safety
    factor because it is the difference of two quadrature orders.
    """
    span = points[-1] - points[0]
    total = mpmath.mpf(0)
    err = mpmath.mpf(0)
    stack = [(points[i], points[i + 1], 0) for i in range(len(points) - 1)]
    stack.reverse()
    while stack:
        a, b, depth = stack.pop()
        v, e = mpmath.quad(f, [a, b], method="gauss-legendre", error=True)
        if e > panel_tol * (b - a) / span and depth < max_depth:
            m = (a + b) / 2
            stack.append((m, b, depth + 1))
            stack.append((a, m, depth + 1))
            continue
        total += v
        err += 10 * e
    return total, err


def concentration_breakpoints(n, k, cutoff):
    """Panel breakpoints for int_0^t_max (1 - 2k sin^2(t/2))^n dt.

    The integrand is roughly exp(-n k t^2 / 2), so panels grow geometrically
    from the width 1/sqrt(nk); ``t_max`` is where the integrand has dropped
    below exp(-cutoff). Returns ``(points, t_max)``.
    """
    pi = mpmath.pi
    if n == 0 or k == 0:
        return [mpmath.mpf(0), pi / 2, pi], pi
    frac = -mpmath.expm1(-cutoff / n) / (2 * k)
    if frac >= 1:
        t_max = pi
    else:
        t_max = 2 * mpmath.asin(mpmath.sqrt(frac))
    width = 1 / mpmath.sqrt(n * k)
    if width * 8 >= t_max:
        return [t_max * i / 4 for i in range(5)], t_max
    pts = [mpmath.mpf(0)]
    step = width
    while pts[-1] + step < t_max:
        pts.append(pts[-1] + step)
        step *= 2
    pts.append(t_max)
    return pts, t_max


@dataclass(frozen=True)
class LegendreIntegral:
    """P_n(u) = mantissa * exp(log_scale), with ``error`` bounding the mantissa."""

    mantissa: object
    log_scale: object
    error: object
    digits: int

    def value(self):
        return self.mantissa * mpmath.exp(self.log_scale)


def _integral_once(n: int, u, s, digits: int) -> LegendreIntegral:
    with mpmath.workdps(digits + 10):
        u = to_mpf(u) if isinstance(u, (int, Fraction)) else mpmath.mpf(u)
        s = mpmath.sqrt(u * u - 1) if s is None else (to_mpf(s) if isinstance(s, Fraction) else mpmath.mpf(s))
        g0 = u + s
        k = s / g0
        big_n = mpmath.mpf(n)
        cutoff = (digits + 10) * mpmath.log(10)
        pts, t_max = concentration_breakpoints(big_n, k, cutoff)

        def integrand(t):
            return mpmath.exp(big_n * mpmath.log1p(-2 * k * mpmath.sin(t / 2) ** 2))

        tol = mpmath.mpf(10) ** (-digits - 3)
        val, qerr = integrate_panels(integrand, pts, tol)
        pi = mpmath.pi
        trunc = (pi - t_max) * mpmath.exp(-cutoff)
        rounding = pi * 2 * 10 * mpmath.eps
        mantissa = val / pi
        err = (qerr + trunc + rounding) / pi
        return LegendreIntegral(+mantissa, big_n * mpmath.log(g0), +err, digits)


def legendre_integral(n: int, u, cfg: PrecisionConfig = PrecisionConfig(), sqrt_u2m1=None) -> LegendreIntegral:
    """P_n(u) for u > 1 from the integral representation.

    ``sqrt_u2m1`` may supply sqrt(u^2 - 1) computed in a cancellation-free
    form. The relative error target is 10^-working_digits; precision is
    escalated up to ``cfg.max_digits`` before giving up.
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    if n == 0:
        return LegendreIntegral(mpmath.mpf(1), mpmath.mpf(0), mpmath.mpf(0), 0)
    if u <= 1:
        raise ValueError("integral form requires u > 1")
    target = mpmath.mpf(10) ** (-cfg.working_digits)
    for digits in cfg.schedule():
        res = _integral_once(n, u, sqrt_u2m1, digits + 5)
        if res.error <= target * abs(res.mantissa):
            return res
    raise QuadratureFailure(f"P_{n}(u) not resolved within {cfg.max_digits} digits")
