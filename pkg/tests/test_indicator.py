from fractions import Fraction as F

import pytest

from coinduel.bounds import bound_set
from coinduel.indicator import IndicatorQuery, indicator_sign, quadrature_sign, recurrence_sign, sign_of
from coinduel.model import GameParams, reflect
from coinduel.numerics import Method, PrecisionConfig, Sign

CFG = PrecisionConfig(30, 2000)


def test_diagonal_zero():
    res = sign_of(GameParams(F(2, 5), F(3, 5)), 2)
    assert res.sign is Sign.ZERO and res.method is Method.EXACT_RATIONAL


def test_example_params_signs(example_params):
    assert sign_of(example_params, 1).sign is Sign.POSITIVE
    assert sign_of(example_params, 25).sign is Sign.POSITIVE
    assert sign_of(example_params, 26).sign is Sign.NEGATIVE


@pytest.mark.parametrize("strategy", ["exact", "recurrence", "quadrature"])
def test_strategies_on_example_params(example_params, strategy):
    for n, want in [(1, 1), (25, 1), (26, -1), (100, -1)]:
        assert int(indicator_sign(IndicatorQuery(example_params, n), CFG, strategy=strategy).sign) == want


def test_dispatch_by_cutoff(example_params):
    assert sign_of(example_params, 10).method is Method.EXACT_RATIONAL
    assert sign_of(example_params, 501).method is Method.HIGH_PRECISION_RECURRENCE
    assert sign_of(example_params, 10**8).method is Method.QUADRATURE
    assert sign_of(example_params, 600, recurrence_cutoff=500).method is Method.QUADRATURE


def test_threshold_structure(rng):
    for _ in range(10):
        while True:
            a, b = F(rng.randint(1, 59), 60), F(rng.randint(1, 59), 60)
            if a < b:
                break
        g = GameParams(a, b)
        upper = bound_set(g).upper
        signs = [int(sign_of(g, n).sign) for n in range(1, upper + 4)]
        first = next(i for i, s in enumerate(signs) if s <= 0)
        assert all(s > 0 for s in signs[:first])
        rest = signs[first:]
        assert all(s < 0 for s in rest[1:]) and rest[0] <= 0


def test_reflection_consistency(rng):
    for _ in range(20):
        a, b = F(rng.randint(1, 99), 100), F(rng.randint(1, 99), 100)
        if a >= b or a + b == 1:
            continue
        g = GameParams(a, b)
        for n in (1, 3, 30):
            assert sign_of(g, n).sign is sign_of(reflect(g), n).sign


def test_near_diagonal_escalation():
    # 1 - p - q = 1e-40: u and rho are ~1e40
    g = GameParams(F(4, 10), F(6, 10) - F(1, 10**40))
    for n in (1, 2, 3, 600):
        exact = indicator_sign(IndicatorQuery(g, n), CFG, strategy="exact").sign
        assert recurrence_sign(g, n, CFG).sign is exact
        assert quadrature_sign(g, n, CFG).sign is exact


def test_huge_n_table_point():
    g = GameParams(F(1, 10**20), F(2, 10**20))
    n = 72768903179467598852
    assert sign_of(g, n - 1).sign is Sign.POSITIVE
    assert sign_of(g, n).sign is Sign.NEGATIVE
