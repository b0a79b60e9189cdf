"""Pure-Python double-precision kernels; the reference twin of ``_kernels.pyx``.

The indicator sign is decided through the rescaled ratio sequence
``a_n = (1 - p - q) (r_n(u) - 1)``, which obeys

    a_1 = 2pq,
    a_{n+1} = ((2n+1) 2pq + n a_n s / (s + a_n)) / (n + 1),   s = 1 - p - q,

and J_n > 0 exactly when a_{n+1} < 2q. Every operation adds positive
quantities, so relative rounding errors accumulate at most linearly: after
n steps the relative error is below 7 (n+1) unit roundoffs plus the input
error. The kernels report a sign only when the margin exceeds twice that.
"""
from math import ceil, floor, sqrt

UNIT_ROUNDOFF = 2.0**-53
SIMPLE_TOL = 1e-9
QUADRATIC_TOL = 1e-7

IMPLEMENTATION = "python"


def _tolerance(n, rel_in):
    return 2.0 * (8.0 * (n + 2) * UNIT_ROUNDOFF + rel_in)


def _advance(a, n, c, s):
    """a_n -> a_{n+1}."""
    return ((2 * n + 1) * c + n * a * s / (s + a)) / (n + 1)


def indicator_sign(c, s, two_q, n, rel_in):
    """Sign of J_n from doubles: +1, -1, or 0 when not certified."""
    a = c
    for k in range(1, n + 1):
        a = _advance(a, k, c, s)
    tol = _tolerance(n, rel_in)
    if a < two_q * (1.0 - tol):
        return 1
    if a > two_q * (1.0 + tol):
        return -1
    return 0


def scan_optimal(c, s, two_q, cap, rel_in):
    """Least n >= 1 with J_n <= 0, scanning n upward.

    Returns ``(N, certified)``; ``N == -1`` when no such n <= cap exists.
    """
    a_prev = c
    n = 1
    while n <= cap:
        a = _advance(a_prev, n, c, s)
        if a >= two_q:
            ok = a > two_q * (1.0 + _tolerance(n, rel_in)) and a_prev < two_q * (
                1.0 - _tolerance(n - 1, rel_in)
            )
            return n, ok
        a_prev = a
        n += 1
    return -1, True


def _near_integer(x, tol):
    return abs(x - round(x)) <= tol * (abs(x) + 1.0)


def _positive_root(a, b, c):
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return float("nan")
    r = sqrt(disc)
    if b >= 0.0:
        return (-2.0 * c) / (b + r)
    return (-b + r) / (2.0 * a)


def classify_point(q, p, cap):
    """Bounds and N for one point of T in double precision.

    Returns ``(N, lower_strict, upper, linear, n_minus, n_plus, h, flagged)``;
    ``flagged`` marks results that rounding could have changed.
    """
    d = p - q
    s = (1.0 - p) - q
    flagged = False
    x = 1.0 / (2.0 * d) + 0.5
    y = (1.0 - p) / d
    if y > cap + 2 or not x == x:
        return -1, -1, -1, -1, -1, -1, -1, False
    flagged |= _near_integer(x, SIMPLE_TOL) or _near_integer(y, SIMPLE_TOL)
    lower = int(floor(x))
    upper = int(ceil(y))
    z = (1.0 - p) / (p - 0.5 * q)
    flagged |= _near_integer(z, SIMPLE_TOL)
    linear = int(ceil(z))
    w = 1.0 / (2.0 * d) - 1.5 + 1.0 / (4.0 * p * (1.0 - p))
    flagged |= _near_integer(w, SIMPLE_TOL)
    h = int(ceil(w))
    qa = 2.0 * d * d * d
    qb = 2.0 * (p * p - 3.0 * p * q - p + q * q + 2.0 * q) * d
    qc = -(1.0 - p) * q * (1.0 - 3.0 * p + 3.0 * q)
    rm = _positive_root(qa, qb, qc)
    pp = p * (1.0 - p)
    ua = 2.0 * pp * d + d * q * (1.0 - q)
    ub = 2.0 * pp * (d + p - 1.0) - q * q * (1.0 - q)
    uc = 2.0 * pp * (p - 1.0)
    rp = _positive_root(ua, ub, uc)
    if not (rm == rm and rp == rp):
        flagged = True
        n_minus = n_plus = -1
    else:
        flagged |= _near_integer(rm, QUADRATIC_TOL) or _near_integer(rp, QUADRATIC_TOL)
        n_minus = max(0, int(ceil(rm)))
        n_plus = max(0, int(ceil(rp)))
    n, ok = scan_optimal(2.0 * p * q, s, 2.0 * q, cap, 4.0 * UNIT_ROUNDOFF * (1.0 + (p + q) / s))
    return n, lower, upper, linear, n_minus, n_plus, h, flagged or not ok


BATCH_FIELDS = ("N", "lower_strict", "upper", "linear", "n_minus", "n_plus", "h")


def classify_batch(qs, ps, cap):
    """Apply :func:`classify_point` over arrays; returns a dict of int64 arrays
    plus a boolean ``flagged`` array."""
    import numpy as np

    rows = [classify_point(float(q), float(p), cap) for q, p in zip(qs, ps)]
    out = {}
    for i, name in enumerate(BATCH_FIELDS):
        out[name] = np.fromiter((r[i] for r in rows), dtype=np.int64, count=len(rows))
    out["flagged"] = np.fromiter((r[7] for r in rows), dtype=bool, count=len(rows))
    return out
