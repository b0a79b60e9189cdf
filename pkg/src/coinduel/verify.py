"""Oracle cross-check suites behind ``coinduel verify``.

Each check compares a fast path against an independent ground truth (exact
rational brute force, closed forms, published values) and reports a single
pass/fail line. ``quick`` finishes in well under a minute; ``full`` runs the
same checks at acceptance scale.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Tuple

import mpmath

from .bounds import bound_set, diagonal_n
from .exact_oracle import (
    brute_force_argmax,
    brute_force_f,
    generating_function_coefficients,
    phi_exact,
    psi_exact,
    verify_recurrence_identity,
)
from .indicator import IndicatorQuery, indicator_sign
from .legendre import legendre_p
from .model import GameParams, reflect, transform
from .nullcline import p1_closed, p2_closed, trace
from .numerics import PrecisionConfig
from .optimizer import optimal_n
from .reference import PUBLISHED_N
from .regions import sample_region
from .winprob import y_values

LEVELS = ("quick", "full")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail} ({self.seconds:.2f}s)"


def random_rational(rng: random.Random, max_den: int = 97) -> Fraction:
    den = rng.randint(2, max_den)
    return Fraction(rng.randint(1, den - 1), den)


def random_params(rng: random.Random, max_upper: int = 60, max_den: int = 97, side: str = "any") -> GameParams:
    """A random rational (q, p) with simple upper bound at most ``max_upper``.

    ``side`` is ``"T"`` (p + q < 1), ``"reflected"`` (p + q > 1) or ``"any"``.
    """
    while True:
        a, b = random_rational(rng, max_den), random_rational(rng, max_den)
        if a == b:
            continue
        params = GameParams(min(a, b), max(a, b))
        if side == "T" and params.slack <= 0:
            continue
        if side == "reflected" and params.slack >= 0:
            continue
        if bound_set(params).upper_simple <= max_upper:
            return params


# -- individual checks ------------------------------------------------------------

def check_worked_example() -> Tuple[bool, str]:
    params = GameParams.parse("0.18", "0.2")
    n = optimal_n(params).N
    f1 = brute_force_f(params, 1)
    f26 = float(brute_force_f(params, 26))
    ok = n == 26 and f1 == Fraction(18, 125) and 0.355 <= f26 <= 0.365
    return ok, f"N={n}, f(1)={f1}, f(26)={f26:.5f}"


def check_oracle(points: int, seed: int = 1) -> Tuple[bool, str]:
    rng = random.Random(seed)
    bad = 0
    for i in range(points):
        params = random_params(rng, side="any" if i % 10 else "T")
        upper = bound_set(params).upper_simple
        want, _ = brute_force_argmax(params, upper + 2)
        if optimal_n(params).N != want:
            bad += 1
    return bad == 0, f"{bad} mismatches in {points} points"


def check_identities(points: int, seed: int = 2) -> Tuple[bool, str]:
    rng = random.Random(seed)
    failures = []
    for _ in range(points):
        params = random_params(rng, max_upper=10**9, side="T")
        z = transform(params).z
        if not all(verify_recurrence_identity(params, n) for n in range(16)):
            failures.append("recurrence")
        for n in range(12):
            if psi_exact(n, z) != (phi_exact(n + 1, z) - (1 + z) * phi_exact(n, z)) / 2:
                failures.append("psi")
            if (1 - z) ** n * legendre_p(n, (1 + z) / (1 - z)).value != phi_exact(n, z):
                failures.append("phi")
        if generating_function_coefficients(params, 12) != [brute_force_f(params, n) for n in range(13)]:
            failures.append("generating function")
    return not failures, "all exact" if not failures else f"failed: {sorted(set(failures))}"


def check_y_recurrence(points: int, n_max: int = 100, seed: int = 3) -> Tuple[bool, str]:
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(points):
        params = random_params(rng, max_upper=10**9, side="T")
        u = transform(params).u
        s = params.slack
        direct = [1 / s]
        term_sum, s_pow = Fraction(0), Fraction(1)
        prev, cur = Fraction(1), u  # P_0, P_1
        for k in range(n_max):
            pk = Fraction(1) if k == 0 else cur if k == 1 else None
            if k >= 2:
                prev, cur = cur, ((2 * k - 1) * u * cur - (k - 1) * prev) / k
                pk = cur
            term_sum += s_pow * pk
            s_pow *= s
            direct.append(1 / s + term_sum)
        with mpmath.workdps(60):
            rec = y_values(params, n_max, number=mpmath.mpf)
            for a, b in zip(rec, direct):
                ref = mpmath.mpf(b.numerator) / b.denominator
                worst = max(worst, float(abs(a - ref) / abs(ref)))
    return worst <= 1e-20, f"max relative error {worst:.2e}"


def check_published_n(ks) -> Tuple[bool, str]:
    wrong = []
    for k in ks:
        params = GameParams(Fraction(1, 10**k), Fraction(2, 10**k))
        if optimal_n(params).N != PUBLISHED_N[k]:
            wrong.append(k)
    return not wrong, f"k={list(ks)}" + (f", wrong at {wrong}" if wrong else " exact")


def check_diagonal_symmetry(points: int, seed: int = 4) -> Tuple[bool, str]:
    rng = random.Random(seed)
    bad = 0
    for _ in range(points):
        q = random_rational(rng)
        if q >= Fraction(1, 2) or q / (1 - 2 * q) > 60:
            continue
        if diagonal_n(q) != brute_force_argmax(GameParams(q, 1 - q), 70)[0]:
            bad += 1
    for _ in range(points):
        params = random_params(rng, max_upper=10**6, side="T")
        if optimal_n(params).N != optimal_n(reflect(params)).N:
            bad += 1
    return bad == 0, f"{bad} mismatches"


def check_strategies(points: int, ns=(1, 10, 100, 500), seed: int = 5) -> Tuple[bool, str]:
    rng = random.Random(seed)
    cfg = PrecisionConfig(30, 2000)
    bad = 0
    for _ in range(points):
        params = random_params(rng, max_upper=10**9, side="T")
        for n in ns:
            q = IndicatorQuery(params, n)
            signs = {indicator_sign(q, cfg, strategy=s).sign for s in ("exact", "recurrence", "quadrature")}
            bad += len(signs) != 1
    return bad == 0, f"{bad} disagreements over {points} x {list(ns)}"


def check_nullcline() -> Tuple[bool, str]:
    worst = 0.0
    for n, closed in ((1, p1_closed), (2, p2_closed)):
        tr = trace(n, samples=100)
        if tr.violations:
            return False, tr.violations[0]
        worst = max(worst, max(abs(s.p - closed(s.q)) for s in tr.samples))
    return worst <= 1e-8, f"sup error {worst:.2e}"


def check_region(count: int) -> Tuple[bool, str]:
    region = sample_region(count, seed=7)  # raises if any N escapes its bounds
    fr = region.fractions()
    return True, ", ".join(f"{k}={v.value:.4f}" for k, v in fr.items() if k in ("simple_agree", "bounds_agree", "lower_correct"))


def suite(level: str) -> List[Tuple[str, Callable[[], Tuple[bool, str]]]]:
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    full = level == "full"
    return [
        ("worked example", check_worked_example),
        ("optimal N vs brute-force argmax", lambda: check_oracle(300 if full else 40)),
        ("exact identities", lambda: check_identities(20 if full else 3)),
        ("Y recurrence vs definition", lambda: check_y_recurrence(10 if full else 2)),
        ("published table", lambda: check_published_n((5, 10, 15, 20, 25, 30) if full else (5, 10))),
        ("diagonal formula and symmetry", lambda: check_diagonal_symmetry(100 if full else 15)),
        ("indicator strategies agree", lambda: check_strategies(50 if full else 4, (1, 10, 100, 500) if full else (1, 10, 100))),
        ("nullcline closed forms", check_nullcline),
        ("region bounds sandwich", lambda: check_region(10**6 if full else 20000)),
    ]


def run(level: str = "quick", report: Callable[[str], None] | None = None) -> List[CheckResult]:
    results = []
    for name, fn in suite(level):
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed check, not an aborted run
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        res = CheckResult(name, ok, detail, time.perf_counter() - t0)
        if report is not None:
            report(res.line())
        results.append(res)
    return results
