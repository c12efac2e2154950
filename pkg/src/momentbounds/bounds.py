"""Lower bounds on ``S = E[1/(1 - x)]`` from the first two moments.

``bound1(m, v) = 1/(1 - m) + v/8`` comes from integrating a quadratic
minorant of ``f(x) = 1/(1 - x)`` with curvature 1/8 tangent at the mean.
``bound2(s, v) = 1/(s - v/2)`` (with ``s = 1 - m``) comes from a
Cauchy-Schwarz argument on ``U = 1 - x`` and ``A = 1 - (U - s)/2``.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import kernels
from .errors import CenterOutOfRange, DomainError, InfeasibleMoments, PointOutOfRange
from .measures import Measure, summarize

CURVATURE = 0.125
APPLICABILITY_TOL = 1e-12
STRICT_TOL = 1e-12
ARGMAX_GRID = 1001
ARGMAX_TOL = 1e-10


def f(x):
    """The integrand ``1/(1 - x)``."""
    return 1.0 / (1.0 - x)


def f_prime(x):
    value = 1.0 / (1.0 - x)
    return value * value


def f_second(x):
    return 2.0 / (1.0 - x) ** 3


@dataclass(frozen=True)
class QuadMinorant:
    """``q(x) = value + slope*(x - c) + (x - c)**2 / 8``, tangent to f at c."""

    c: float
    value: float
    slope: float
    curvature: float = CURVATURE

    def __call__(self, x):
        d = x - self.c
        return (self.value + self.slope * d) + self.curvature * (d * d)

    def derivative(self, x):
        return self.slope + 2.0 * self.curvature * (x - self.c)

    @property
    def alpha(self) -> float:
        """Constant coefficient of the expanded form ``alpha + beta*x + x**2/8``."""
        return self.value - self.slope * self.c + self.curvature * self.c * self.c

    @property
    def beta(self) -> float:
        return self.slope - 2.0 * self.curvature * self.c


def _check_center(c: float) -> None:
    if not -1.0 < c < 1.0:
        raise CenterOutOfRange(f"center {c!r} is not inside (-1, 1)")


def minorant_at(c: float) -> QuadMinorant:
    """Quadratic minorant of f matching its value and slope at ``c``.

    Since ``f''(x) = 2/(1 - x)**3 >= 1/4`` on (-1, 1), ``f - q`` is convex
    with a stationary point at ``c``, hence ``q <= f`` on the whole interval.
    """
    c = float(c)
    _check_center(c)
    value = 1.0 / (1.0 - c)
    return QuadMinorant(c=c, value=value, slope=value * value)


def minorant_gap(mq: QuadMinorant, x: float) -> float:
    if not -1.0 < x < 1.0:
        raise PointOutOfRange(f"point {x!r} is not inside (-1, 1)")
    return f(x) - mq(x)


def minorant_grid(c: float, xs) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Evaluate ``f``, ``q`` and the gap on an array of points."""
    mq = minorant_at(c)
    xs = np.asarray(xs, dtype=np.float64)
    if xs.size and not (np.all(xs > -1.0) and np.all(xs < 1.0)):
        raise PointOutOfRange("grid points must lie inside (-1, 1)")
    fx = 1.0 / (1.0 - xs)
    qx = mq(xs)
    return fx, qx, fx - qx


def min_gap_over_grid(centers, xs):
    """Minimum of ``f - q_c`` over ``xs`` for every center (compiled kernel)."""
    centers = np.asarray(centers, dtype=np.float64)
    if centers.size and not (np.all(centers > -1.0) and np.all(centers < 1.0)):
        raise CenterOutOfRange("centers must lie inside (-1, 1)")
    return kernels.minorant_min_gap(centers, xs)


def _check_mv(m: float, v: float) -> None:
    if not -1.0 < m < 1.0:
        raise DomainError(f"mean {m!r} is not inside (-1, 1)")
    if not v >= 0.0:
        raise DomainError(f"variance {v!r} is negative")


def eval_F(c: float, m: float, v: float) -> float:
    """Integral of the minorant centred at ``c`` against any measure with mean m, variance v."""
    _check_center(c)
    _check_mv(m, v)
    u = 1.0 - c
    d = m - c
    return 1.0 / u + d / (u * u) + CURVATURE * (d * d + v)


def _eval_F_grid(cs: np.ndarray, m: float, v: float) -> np.ndarray:
    u = 1.0 - cs
    d = m - cs
    return 1.0 / u + d / (u * u) + CURVATURE * (d * d + v)


def argmax_F(m: float, v: float) -> float:
    """Numerical maximiser of ``eval_F(., m, v)`` over (-1, 1).

    A 1001-point cell-centred grid locates the peak, then golden-section
    search refines the bracket of the two neighbouring cells down to width
    1e-10. The refinement compares objective values in extended precision;
    nothing here presumes where the maximum lies.
    """
    _check_mv(m, v)
    h = 2.0 / ARGMAX_GRID
    cs = -1.0 + h * (np.arange(ARGMAX_GRID) + 0.5)
    k = int(np.argmax(_eval_F_grid(cs, m, v)))
    lo = cs[k - 1] if k > 0 else -1.0
    hi = cs[k + 1] if k < ARGMAX_GRID - 1 else 1.0
    return float(kernels.golden_max_F(m, v, float(lo), float(hi), ARGMAX_TOL))


def _check_feasible(m: float, v: float) -> None:
    if not -1.0 < m < 1.0:
        raise InfeasibleMoments(f"mean {m!r} is not inside (-1, 1)")
    if not v >= 0.0:
        raise InfeasibleMoments(f"variance {v!r} is negative")
    if v > (1.0 - m) * (1.0 + m) + 1e-12:
        raise InfeasibleMoments(f"variance {v!r} exceeds 1 - m^2 = {(1.0 - m) * (1.0 + m)!r}")


def bound1(m: float, v: float) -> float:
    """``1/(1 - m) + v/8``; always greater than 1/2."""
    _check_feasible(m, v)
    return 1.0 / (1.0 - m) + v / 8.0


def bound2(s: float, v: float) -> float | None:
    """``1/(s - v/2)``, or ``None`` when ``s - v/2 <= 1e-12``.

    ``None`` means the hypothesis of the bound fails; it is not an error.
    Invalid input (``s`` outside (0, 2) or ``v < 0``) raises
    :class:`DomainError`.
    """
    if not 0.0 < s < 2.0:
        raise DomainError(f"s = {s!r} is not inside (0, 2)")
    if not v >= 0.0:
        raise DomainError(f"variance {v!r} is negative")
    denom = s - 0.5 * v
    if denom <= APPLICABILITY_TOL:
        return None
    return 1.0 / denom


@dataclass(frozen=True)
class SchwarzChain:
    EA: float
    EUA2: float
    E_inv_U: float
    ec2_lhs: float
    ec2_rhs: float
    s: float
    v: float

    @property
    def expansion_residual(self) -> float:
        """``E[U A^2] - (s - v + E[U (U - s)^2] / 4)``, zero up to rounding."""
        return self.EUA2 - (self.s - self.v + 0.25 * self.ec2_lhs)


def _chain_terms(mu: Measure):
    x = mu.x
    m = mu.expect(x)
    dev = m - x  # U - s
    v = mu.expect(dev * dev)
    U = 1.0 - x
    return m, v, U, dev


def schwarz_chain(mu: Measure) -> SchwarzChain:
    """All quantities of the Cauchy-Schwarz argument, as exact weighted sums.

    With ``U = 1 - x`` and ``A = 1 - (U - s)/2`` one has ``E[A] = 1`` and
    ``1 = E[A]**2 <= E[1/U] * E[U A^2]``.
    """
    m, v, U, dev = _chain_terms(mu)
    A = 1.0 - 0.5 * dev
    return SchwarzChain(
        EA=mu.expect(A),
        EUA2=mu.expect(U * A * A),
        E_inv_U=mu.expect(1.0 / U),
        ec2_lhs=mu.expect(U * dev * dev),
        ec2_rhs=2.0 * v,
        s=1.0 - m,
        v=v,
    )


def ec2_check(mu: Measure) -> tuple[float, float, bool]:
    """``(E[U (U - s)^2], 2v, v > 1e-12)``; the first never exceeds the second."""
    _, v, U, dev = _chain_terms(mu)
    return mu.expect(U * dev * dev), 2.0 * v, v > STRICT_TOL


@dataclass(frozen=True)
class BoundReport:
    S: float
    bound1: float
    bound2_applicable: bool
    bound2: float | None
    gap1: float
    gap2: float | None
    strict_expected: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        del d["bound2_applicable"]
        return d


def report(mu: Measure) -> BoundReport:
    summary = summarize(mu, 2)
    S = summary.S_exact
    b1 = bound1(summary.m, summary.v)
    b2 = bound2(summary.s, summary.v)
    return BoundReport(
        S=S,
        bound1=b1,
        bound2_applicable=b2 is not None,
        bound2=b2,
        gap1=S - b1,
        gap2=None if b2 is None else S - b2,
        strict_expected=summary.v > STRICT_TOL,
    )


def bounds_only(m: float, v: float) -> dict:
    """Both bounds for a raw (m, v) pair, as emitted by ``report --mean --var``."""
    b1 = bound1(m, v)
    return {"bound1": b1, "bound2": bound2(1.0 - m, v), "strict_expected": v > STRICT_TOL}
