# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_pykernels`` for the reference semantics."""
import numpy as np

from libc.math cimport fma, sqrt

cdef double INV_PHI = (sqrt(5.0) - 1.0) / 2.0


cdef struct dd:
    double hi
    double lo


cdef inline dd two_sum(double a, double b) noexcept nogil:
    cdef dd r
    cdef double bb
    r.hi = a + b
    bb = r.hi - a
    r.lo = (a - (r.hi - bb)) + (b - bb)
    return r


cdef inline dd quick_two_sum(double a, double b) noexcept nogil:
    cdef dd r
    r.hi = a + b
    r.lo = b - (r.hi - a)
    return r


cdef inline dd two_prod(double a, double b) noexcept nogil:
    cdef dd r
    r.hi = a * b
    r.lo = fma(a, b, -r.hi)
    return r


cdef inline dd dd_add(dd a, dd b) noexcept nogil:
    cdef dd s = two_sum(a.hi, b.hi)
    cdef dd t = two_sum(a.lo, b.lo)
    s.lo += t.hi
    s = quick_two_sum(s.hi, s.lo)
    s.lo += t.lo
    return quick_two_sum(s.hi, s.lo)


cdef inline dd dd_neg(dd a) noexcept nogil:
    a.hi = -a.hi
    a.lo = -a.lo
    return a


cdef inline dd dd_mul(dd a, dd b) noexcept nogil:
    cdef dd p = two_prod(a.hi, b.hi)
    p.lo += a.hi * b.lo + a.lo * b.hi
    return quick_two_sum(p.hi, p.lo)


cdef inline dd dd_mul_d(dd a, double b) noexcept nogil:
    cdef dd p = two_prod(a.hi, b)
    p.lo += a.lo * b
    return quick_two_sum(p.hi, p.lo)


cdef inline dd dd_div(dd a, dd b) noexcept nogil:
    cdef double q1, q2, q3
    cdef dd r, q
    q1 = a.hi / b.hi
    r = dd_add(a, dd_neg(dd_mul_d(b, q1)))
    q2 = r.hi / b.hi
    r = dd_add(r, dd_neg(dd_mul_d(b, q2)))
    q3 = r.hi / b.hi
    q = quick_two_sum(q1, q2)
    return dd_add(q, two_sum(q3, 0.0))


cdef inline dd objective_dd(double c, double m, double v) noexcept nogil:
    cdef dd one, u, d, inv, t, w
    one.hi = 1.0
    one.lo = 0.0
    u = two_sum(1.0, -c)
    d = two_sum(m, -c)
    inv = dd_div(one, u)
    t = dd_mul(d, dd_mul(inv, inv))
    w = dd_mul_d(dd_add(dd_mul(d, d), two_sum(v, 0.0)), 0.125)
    return dd_add(dd_add(inv, t), w)


cdef inline bint dd_less(dd a, dd b) noexcept nogil:
    cdef dd diff = dd_add(a, dd_neg(b))
    return diff.hi < 0.0


def dot2(a, b):
    """Compensated dot product (Ogita, Rump and Oishi cascade)."""
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t i, n = av.shape[0]
    cdef dd acc, h
    cdef double err = 0.0
    if bv.shape[0] != n:
        raise ValueError("length mismatch")
    if n == 0:
        return 0.0
    with nogil:
        acc = two_prod(av[0], bv[0])
        err = acc.lo
        for i in range(1, n):
            h = two_prod(av[i], bv[i])
            acc = two_sum(acc.hi, h.hi)
            err += acc.lo + h.lo
    return acc.hi + err


def sum2(a):
    """Compensated sum (Ogita-Rump-Oishi Sum2)."""
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef Py_ssize_t i, n = av.shape[0]
    cdef double s = 0.0, err = 0.0
    cdef dd t
    with nogil:
        for i in range(n):
            t = two_sum(s, av[i])
            s = t.hi
            err += t.lo
    return s + err


def power_moments(x, w, int n_max):
    """Return ``[sum(w * x**k) for k in 0..n_max]`` with compensated sums."""
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    cdef Py_ssize_t i, k
    out = np.zeros(n_max + 1)
    cdef double[::1] ov = out
    powers = np.ones(n)
    cdef double[::1] pv = powers
    cdef double[::1] sv = np.zeros(n_max + 1)
    cdef double[::1] ev = np.zeros(n_max + 1)
    cdef dd h, t
    with nogil:
        for i in range(n):
            for k in range(n_max + 1):
                h = two_prod(wv[i], pv[i])
                t = two_sum(sv[k], h.hi)
                sv[k] = t.hi
                ev[k] += t.lo + h.lo
                pv[i] = pv[i] * xv[i]
        for k in range(n_max + 1):
            ov[k] = sv[k] + ev[k]
    return out


def minorant_min_gap(centers, xs):
    """For each center, the minimum over ``xs`` of f(x) - q_c(x) and its index."""
    cdef const double[::1] cv = np.ascontiguousarray(centers, dtype=np.float64)
    cdef const double[::1] xv = np.ascontiguousarray(xs, dtype=np.float64)
    cdef Py_ssize_t nc = cv.shape[0], nx = xv.shape[0]
    cdef Py_ssize_t j, i, best_i
    f_arr = np.empty(nx)
    cdef double[::1] f = f_arr
    min_gap = np.empty(nc)
    index = np.empty(nc, dtype=np.int64)
    cdef double[::1] gv = min_gap
    cdef long long[::1] iv = index
    cdef double c, value, slope, d, gap, best
    with nogil:
        for i in range(nx):
            f[i] = 1.0 / (1.0 - xv[i])
        for j in range(nc):
            c = cv[j]
            value = 1.0 / (1.0 - c)
            slope = value * value
            best = 1e308
            best_i = 0
            for i in range(nx):
                d = xv[i] - c
                gap = f[i] - ((value + slope * d) + 0.125 * (d * d))
                if gap < best:
                    best = gap
                    best_i = i
            gv[j] = best
            iv[j] = best_i
    return min_gap, index


def golden_max_F(double m, double v, double lo, double hi, double tol):
    """Golden-section maximiser with double-double objective comparisons."""
    cdef double a = lo, b = hi, x1, x2
    cdef dd f1, f2
    cdef int it
    with nogil:
        x1 = b - INV_PHI * (b - a)
        x2 = a + INV_PHI * (b - a)
        f1 = objective_dd(x1, m, v)
        f2 = objective_dd(x2, m, v)
        for it in range(500):
            if b - a <= tol:
                break
            if dd_less(f1, f2):
                a = x1
                x1 = x2
                f1 = f2
                x2 = a + INV_PHI * (b - a)
                f2 = objective_dd(x2, m, v)
            else:
                b = x2
                x2 = x1
                f2 = f1
                x1 = b - INV_PHI * (b - a)
                f1 = objective_dd(x1, m, v)
    return 0.5 * (a + b)
