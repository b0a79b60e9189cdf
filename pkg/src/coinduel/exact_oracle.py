"""Exact-rational brute force for the win probability and the indicator.

Everything here is deliberately literal: the win probability is the double
binomial sum, the argmax is a linear scan. These functions are the ground
truth that the fast paths are checked against.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

from .model import GameParams, transform


@lru_cache(maxsize=512)
def binomial_row(n: int) -> Tuple[int, ...]:
    row = [1] * (n + 1)
    for r in range(1, n):
        row[r] = row[r - 1] * (n - r + 1) // r
    return tuple(row)


def brute_force_f(params: GameParams, n: int) -> Fraction:
    """Probability that the q-coin shows strictly more heads in n tosses each.

    Sum over r of C(n,r) p^r (1-p)^(n-r) times the tail sum over s > r of
    C(n,s) q^s (1-q)^(n-s); the tail is accumulated from the top so each term
    is touched once. Works on integer numerators over the common denominator.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    a, b = params.p.numerator, params.p.denominator
    c, d = params.q.numerator, params.q.denominator
    row = binomial_row(n)
    pa = [1] * (n + 1)
    pb = [1] * (n + 1)
    qc = [1] * (n + 1)
    qd = [1] * (n + 1)
    for k in range(1, n + 1):
        pa[k] = pa[k - 1] * a
        pb[k] = pb[k - 1] * (b - a)
        qc[k] = qc[k - 1] * c
        qd[k] = qd[k - 1] * (d - c)
    total = 0
    tail = 0  # sum_{s > r} C(n,s) c^s (d-c)^(n-s)
    for r in range(n, -1, -1):
        total += row[r] * pa[r] * pb[n - r] * tail
        tail += row[r] * qc[r] * qd[n - r]
    return Fraction(total, (b * d) ** n)


def brute_force_argmax(params: GameParams, n_max: int) -> Tuple[int, Fraction]:
    """Smallest n in [1, n_max] maximising f; a plain linear scan."""
    if n_max < 1:
        raise ValueError("n_max must be positive")
    best_n, best = 1, brute_force_f(params, 1)
    for n in range(2, n_max + 1):
        v = brute_force_f(params, n)
        if v > best:
            best_n, best = n, v
    return best_n, best


def phi_exact(n: int, z: Fraction) -> Fraction:
    """sum_r C(n,r)^2 z^r, evaluated over a common denominator."""
    z = Fraction(z)
    a, b = z.numerator, z.denominator
    row = binomial_row(n)
    num = 0
    apow, bpow = 1, b**n
    for r in range(n + 1):
        num += row[r] * row[r] * apow * bpow
        apow *= a
        bpow //= b
    return Fraction(num, b**n)


def psi_exact(n: int, z: Fraction) -> Fraction:
    """sum_r C(n,r+1) C(n,r) z^(r+1)."""
    z = Fraction(z)
    a, b = z.numerator, z.denominator
    row = binomial_row(n)
    if n == 0:
        return Fraction(0)
    num = 0
    apow, bpow = a, b ** (n - 1)
    for r in range(n):
        num += row[r + 1] * row[r] * apow * bpow
        apow *= a
        bpow //= b
    return Fraction(num, b**n)


def exact_indicator(params: GameParams, n: int) -> Fraction:
    """J_n(q,p) = y phi_n(z) - psi_n(z) as an exact fraction.

    Its sign is the sign of f(n+1) - f(n).
    """
    t = transform(params)
    return t.y * phi_exact(n, t.z) - psi_exact(n, t.z)


def verify_recurrence_identity(params: GameParams, n: int) -> bool:
    """Check f(n+1) - f(n) == ((1-p)(1-q))^(n+1) J_n exactly."""
    lhs = brute_force_f(params, n + 1) - brute_force_f(params, n)
    scale = ((1 - params.p) * (1 - params.q)) ** (n + 1)
    return lhs == scale * exact_indicator(params, n)


# -- truncated power series over the rationals -------------------------------

def _series_mul(a: List[Fraction], b: List[Fraction], order: int) -> List[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for i, ai in enumerate(a[: order + 1]):
        if ai == 0:
            continue
        for j, bj in enumerate(b[: order + 1 - i]):
            out[i + j] += ai * bj
    return out


def _binomial_series(x: List[Fraction], exponent: Fraction, order: int) -> List[Fraction]:
    """(1 + x)^exponent for a series x with zero constant term."""
    if x and x[0] != 0:
        raise ValueError("series argument must have zero constant term")
    out = [Fraction(0)] * (order + 1)
    out[0] = Fraction(1)
    power = [Fraction(1)] + [Fraction(0)] * order
    coeff = Fraction(1)
    for k in range(1, order + 1):
        coeff = coeff * (exponent - k + 1) / k
        power = _series_mul(power, x, order)
        for i in range(order + 1):
            out[i] += coeff * power[i]
    return out


def generating_function_coefficients(params: GameParams, order: int) -> List[Fraction]:
    """Taylor coefficients of the closed-form generating function of f(n).

    The square-root factor is expanded with the binomial series, so the
    result is an exact list [f(0), ..., f(order)] if the closed form holds.
    """
    p, q = params.p, params.q
    s = 1 - p - q
    # (1 - s t)^2 - 4 p q t = 1 + (-2s - 4pq) t + s^2 t^2
    radicand_minus_one = [Fraction(0), -2 * s - 4 * p * q, s * s] + [Fraction(0)] * order
    inv_sqrt = _binomial_series(radicand_minus_one[: order + 1], Fraction(-1, 2), order)
    numer = [Fraction(1), -(1 - p + q)] + [Fraction(0)] * order
    inner = _series_mul(numer[: order + 1], inv_sqrt, order)
    bracket = [-c for c in inner]
    bracket[0] += 1
    geometric = [Fraction(1, 2)] * (order + 1)  # 1 / (2 (1 - t))
    return _series_mul(geometric, bracket, order)
