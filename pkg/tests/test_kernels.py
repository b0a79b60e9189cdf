import os
import subprocess
import sys
from fractions import Fraction as F

import numpy as np
import pytest

from coinduel import _kernels_py, kernels
from coinduel.bounds import bound_set
from coinduel.model import GameParams
from coinduel.optimizer import optimal_n
from coinduel.regions import monte_carlo_points

compiled = pytest.importorskip("coinduel._kernels", reason="compiled extension not built")


def test_selected_implementation():
    assert kernels.IMPLEMENTATION in ("cython", "python")
    assert compiled.IMPLEMENTATION == "cython"


def test_env_forces_fallback():
    out = subprocess.run(
        [sys.executable, "-c", "from coinduel import kernels; print(kernels.IMPLEMENTATION)"],
        env={**os.environ, "COINDUEL_PURE_PYTHON": "1"}, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_batch_parity():
    q, p = monte_carlo_points(5000, 11)
    a = compiled.classify_batch(q, p, 5000)
    b = _kernels_py.classify_batch(q, p, 5000)
    for k in kernels.BATCH_FIELDS + ("flagged",):
        assert np.array_equal(a[k], b[k]), k


@pytest.mark.parametrize("n", [1, 7, 100, 5000])
def test_indicator_parity(n):
    for q, p in [(0.18, 0.2), (0.01, 0.5), (0.3, 0.6999), (1e-4, 2e-4)]:
        s = 1 - p - q
        args = (2 * p * q, s, 2 * q, n, 1e-15)
        assert compiled.indicator_sign(*args) == _kernels_py.indicator_sign(*args)


def test_scan_parity():
    for q, p in [(0.18, 0.2), (0.2, 0.3), (1e-4, 2e-4)]:
        args = (2 * p * q, 1 - p - q, 2 * q, 10**6, 1e-15)
        assert compiled.scan_optimal(*args) == _kernels_py.scan_optimal(*args)


def test_scan_cap():
    n, ok = _kernels_py.scan_optimal(2 * 1e-4 * 2e-4, 1 - 3e-4, 2e-4, 100, 1e-15)
    assert n == -1


def test_batch_matches_exact_on_sampled_doubles():
    q, p = monte_carlo_points(300, 12)
    out = kernels.classify_batch(q, p, 2000)
    for i in range(len(q)):
        if out["flagged"][i] or out["N"][i] < 0:
            continue
        g = GameParams(F(float(q[i])), F(float(p[i])))
        b = bound_set(g)
        assert out["N"][i] == optimal_n(g).N
        assert out["lower_strict"][i] == b.lower_simple_strict
        assert out["upper"][i] == b.upper_simple
        assert out["linear"][i] == b.lower_linear
        assert out["n_minus"][i] == b.lower_improved
        assert out["n_plus"][i] == b.upper_improved
        assert out["h"][i] == b.h_approx


def test_example_params_point():
    row = kernels.classify_point(0.18, 0.2, 1000)
    # 0.18 and 0.2 as doubles are not the decimal values; 1/(2d) sits near 25
    assert row[0] == 26 and row[-1] in (True, False)
