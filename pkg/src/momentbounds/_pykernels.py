"""Pure-Python (numpy) implementations of the numerical kernels.

These mirror ``_kernels.pyx`` operation for operation where results are
compared bitwise (minorant gaps) and match it to within a few ulps where
the compensated arithmetic differs (``dot2`` uses ``math.fsum`` here, the
Ogita-Rump-Oishi cascade there).
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1, Dekker split for binary64
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _two_product(a, b):
    """Error-free product: ``a * b == p + e`` exactly (elementwise)."""
    p = a * b
    t = _SPLITTER * a
    a_hi = t - (t - a)
    a_lo = a - a_hi
    t = _SPLITTER * b
    b_hi = t - (t - b)
    b_lo = b - b_hi
    e = ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo
    return p, e


def dot2(a, b) -> float:
    """Compensated dot product of two 1-d float arrays."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    p, e = _two_product(a, b)
    return math.fsum(p.tolist() + e.tolist())


def sum2(a) -> float:
    return math.fsum(np.asarray(a, dtype=np.float64).tolist())


def power_moments(x, w, n_max: int) -> np.ndarray:
    """Return ``[sum(w * x**k) for k in 0..n_max]``.

    Powers are built by repeated multiplication and each row is summed with
    the error-free product plus an exactly rounded sum.
    """
    x = np.asarray(x, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    out = np.empty(n_max + 1)
    out[0] = math.fsum(w.tolist())
    if n_max == 0:
        return out
    powers = np.cumprod(np.broadcast_to(x, (n_max, x.size)), axis=0)
    p, e = _two_product(powers, np.broadcast_to(w, powers.shape))
    terms = np.concatenate([p, e], axis=1).tolist()
    out[1:] = [math.fsum(row) for row in terms]
    return out


def minorant_min_gap(centers, xs):
    """For each center c, minimise ``f(x) - q_c(x)`` over the points ``xs``.

    Returns ``(min_gap, argmin_index)`` arrays, one entry per center.
    """
    centers = np.asarray(centers, dtype=np.float64)
    xs = np.asarray(xs, dtype=np.float64)
    f = 1.0 / (1.0 - xs)
    min_gap = np.empty(centers.size)
    index = np.empty(centers.size, dtype=np.int64)
    buf = np.empty_like(xs)
    d = np.empty_like(xs)
    for k, c in enumerate(centers.tolist()):
        value = 1.0 / (1.0 - c)
        slope = value * value
        np.subtract(xs, c, out=d)
        # gap = f - ((value + slope*d) + 0.125*(d*d)), same order as the C kernel
        np.multiply(d, d, out=buf)
        buf *= 0.125
        d *= slope
        d += value
        d += buf
        np.subtract(f, d, out=buf)
        i = int(np.argmin(buf))
        index[k] = i
        min_gap[k] = buf[i]
    return min_gap, index


def _objective_exact(m: Fraction, v: Fraction):
    def objective(c: float) -> Fraction:
        cc = Fraction(c)
        u = 1 - cc
        d = m - cc
        return 1 / u + d / (u * u) + (d * d + v) / 8

    return objective


def golden_max_F(m: float, v: float, lo: float, hi: float, tol: float) -> float:
    """Golden-section maximiser of the integrated minorant objective on [lo, hi].

    Objective values are compared in exact rational arithmetic, because the
    objective is too flat near its peak for binary64 comparisons when m is
    close to -1. The endpoints themselves are never evaluated.
    """
    objective = _objective_exact(Fraction(m), Fraction(v))
    a, b = lo, hi
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1 = objective(x1)
    f2 = objective(x2)
    for _ in range(500):
        if b - a <= tol:
            break
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = objective(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = objective(x1)
    return 0.5 * (a + b)
