# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled double-precision kernels; semantics mirror ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport ceil, floor, sqrt, fabs, nearbyint, NAN, isnan

cnp.import_array()

cdef double UNIT_ROUNDOFF = 2.0 ** -53
SIMPLE_TOL = 1e-9
QUADRATIC_TOL = 1e-7
cdef double _SIMPLE_TOL = 1e-9
cdef double _QUADRATIC_TOL = 1e-7

IMPLEMENTATION = "cython"
BATCH_FIELDS = ("N", "lower_strict", "upper", "linear", "n_minus", "n_plus", "h")


cdef inline double _tolerance(double n, double rel_in) nogil:
    return 2.0 * (8.0 * (n + 2.0) * UNIT_ROUNDOFF + rel_in)


cdef inline double _advance(double a, double n, double c, double s) nogil:
    return ((2.0 * n + 1.0) * c + n * a * s / (s + a)) / (n + 1.0)


def indicator_sign(double c, double s, double two_q, long long n, double rel_in):
    cdef double a = c
    cdef long long k
    cdef double tol
    with nogil:
        for k in range(1, n + 1):
            a = _advance(a, <double>k, c, s)
    tol = _tolerance(<double>n, rel_in)
    if a < two_q * (1.0 - tol):
        return 1
    if a > two_q * (1.0 + tol):
        return -1
    return 0


cdef long long _scan(double c, double s, double two_q, long long cap, double rel_in,
                     bint *ok) nogil:
    cdef double a_prev = c
    cdef double a
    cdef long long n = 1
    while n <= cap:
        a = _advance(a_prev, <double>n, c, s)
        if a >= two_q:
            ok[0] = (a > two_q * (1.0 + _tolerance(<double>n, rel_in))
                     and a_prev < two_q * (1.0 - _tolerance(<double>(n - 1), rel_in)))
            return n
        a_prev = a
        n += 1
    ok[0] = True
    return -1


def scan_optimal(double c, double s, double two_q, long long cap, double rel_in):
    cdef bint ok = True
    cdef long long n = _scan(c, s, two_q, cap, rel_in, &ok)
    return n, bool(ok)


cdef inline bint _near_integer(double x, double tol) nogil:
    return fabs(x - nearbyint(x)) <= tol * (fabs(x) + 1.0)


cdef inline double _positive_root(double a, double b, double c) nogil:
    cdef double disc = b * b - 4.0 * a * c
    cdef double r
    if disc < 0.0:
        return NAN
    r = sqrt(disc)
    if b >= 0.0:
        return (-2.0 * c) / (b + r)
    return (-b + r) / (2.0 * a)


cdef void _classify(double q, double p, long long cap, long long *out, bint *flagged) nogil:
    cdef double d = p - q
    cdef double s = (1.0 - p) - q
    cdef double x, y, z, w, rm, rp, pp
    cdef double qa, qb, qc, ua, ub, uc
    cdef bint ok = True
    cdef int i
    flagged[0] = False
    x = 1.0 / (2.0 * d) + 0.5
    y = (1.0 - p) / d
    if y > cap + 2 or isnan(x):
        for i in range(7):
            out[i] = -1
        return
    flagged[0] = _near_integer(x, _SIMPLE_TOL) or _near_integer(y, _SIMPLE_TOL)
    out[1] = <long long>floor(x)
    out[2] = <long long>ceil(y)
    z = (1.0 - p) / (p - 0.5 * q)
    flagged[0] = flagged[0] or _near_integer(z, _SIMPLE_TOL)
    out[3] = <long long>ceil(z)
    w = 1.0 / (2.0 * d) - 1.5 + 1.0 / (4.0 * p * (1.0 - p))
    flagged[0] = flagged[0] or _near_integer(w, _SIMPLE_TOL)
    out[6] = <long long>ceil(w)
    qa = 2.0 * d * d * d
    qb = 2.0 * (p * p - 3.0 * p * q - p + q * q + 2.0 * q) * d
    qc = -(1.0 - p) * q * (1.0 - 3.0 * p + 3.0 * q)
    rm = _positive_root(qa, qb, qc)
    pp = p * (1.0 - p)
    ua = 2.0 * pp * d + d * q * (1.0 - q)
    ub = 2.0 * pp * (d + p - 1.0) - q * q * (1.0 - q)
    uc = 2.0 * pp * (p - 1.0)
    rp = _positive_root(ua, ub, uc)
    if isnan(rm) or isnan(rp):
        flagged[0] = True
        out[4] = -1
        out[5] = -1
    else:
        flagged[0] = (flagged[0] or _near_integer(rm, _QUADRATIC_TOL)
                      or _near_integer(rp, _QUADRATIC_TOL))
        out[4] = <long long>ceil(rm) if rm > 0.0 else 0
        out[5] = <long long>ceil(rp) if rp > 0.0 else 0
    out[0] = _scan(2.0 * p * q, s, 2.0 * q, cap,
                   4.0 * UNIT_ROUNDOFF * (1.0 + (p + q) / s), &ok)
    flagged[0] = flagged[0] or not ok


def classify_point(double q, double p, long long cap):
    cdef long long out[7]
    cdef bint flagged = False
    _classify(q, p, cap, out, &flagged)
    return (out[0], out[1], out[2], out[3], out[4], out[5], out[6], bool(flagged))


def classify_batch(qs, ps, long long cap):
    cdef const double[:] qv = np.ascontiguousarray(qs, dtype=np.float64)
    cdef const double[:] pv = np.ascontiguousarray(ps, dtype=np.float64)
    cdef Py_ssize_t m = qv.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=2] res = np.empty((7, m), dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] flags = np.empty(m, dtype=np.uint8)
    cdef long long[:, :] rv = res
    cdef unsigned char[:] fv = flags
    cdef long long out[7]
    cdef bint flagged
    cdef Py_ssize_t j
    cdef int i
    with nogil:
        for j in range(m):
            _classify(qv[j], pv[j], cap, out, &flagged)
            for i in range(7):
                rv[i, j] = out[i]
            fv[j] = flagged
    result = {name: res[i] for i, name in enumerate(BATCH_FIELDS)}
    result["flagged"] = flags.astype(bool)
    return result
