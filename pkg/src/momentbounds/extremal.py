"""Extremal families and brute-force oracles for the geometric moment sum.

``epsilon_family`` is the witness that 1/2 is the best universal lower
bound. ``sharp_scan`` and ``three_atom_search`` estimate the infimum of
``S`` over measures with a prescribed mean and variance; they are
oracles for the gap analysis only and never claim to certify the true
infimum.
"""
from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

from .bounds import bound1, bound2
from .errors import (
    EpsOutOfRange,
    InfeasibleConstraint,
    InvalidInput,
    OracleViolation,
    X1OutOfRange,
)
from .measures import Measure, dirac, geometric_sum, make_atomic

ORACLE_TOL = 1e-10
EDGE_FRACTION = 0.01
WEIGHT_TOL = 1e-12
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ExtremalScan:
    """Sampled family of measures with their geometric sums.

    ``rows`` holds one sample per row, in the order of ``columns``; the last
    column is always ``S``.
    """

    constraint: tuple[float, float] | None
    family: str
    columns: tuple[str, ...]
    rows: np.ndarray
    inf_estimate: float
    attained: bool
    bound1: float | None = None
    bound2: float | None = None
    best: Measure | None = None

    @property
    def samples(self) -> list[tuple[tuple[float, ...], float]]:
        return [(tuple(r[:-1]), r[-1]) for r in self.rows.tolist()]

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]

    def summary(self) -> dict:
        return {
            "inf_estimate": self.inf_estimate,
            "attained": self.attained,
            "bound1": self.bound1,
            "bound2": self.bound2,
        }

    def write_csv(self, fh: TextIO) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows.tolist():
            writer.writerow([repr(value) for value in row])


def epsilon_family(eps: float) -> Measure:
    """``(1 - eps) * delta_{eps - 1} + eps * delta_0``."""
    eps = float(eps)
    if not 0.0 < eps < 1.0:
        raise EpsOutOfRange(f"eps {eps!r} is not inside (0, 1)")
    return make_atomic([-1.0 + eps, 0.0], [1.0 - eps, eps])


def epsilon_sweep(eps_list: Iterable[float]) -> ExtremalScan:
    """Tabulate ``S(eps)`` and ``S(eps) - 1/2`` over the given eps values.

    Raises :class:`OracleViolation` if the first-order behaviour
    ``S(eps) - 1/2 ~ 3 eps / 4`` is not observed, i.e. if some difference is
    not positive or its ratio to eps is off 3/4 by more than eps/4 (plus
    the rounding error of ``S``, about 1e-15/eps in the ratio).
    """
    eps_values = [float(e) for e in eps_list]
    rows = []
    for eps in eps_values:
        S = geometric_sum(epsilon_family(eps))
        excess = S - 0.5
        ratio = excess / eps
        if not excess > 0.0 or abs(ratio - 0.75) > eps / 4.0 + 2e-15 / eps:
            raise OracleViolation(f"S({eps!r}) - 1/2 = {excess!r} breaks first-order behaviour")
        rows.append((eps, S, excess))
    table = np.array(rows, dtype=np.float64).reshape(len(rows), 3)
    inf = float(table[:, 1].min()) if rows else math.inf
    return ExtremalScan(
        constraint=None,
        family="epsilon",
        columns=("eps", "S", "S_minus_half"),
        rows=table,
        inf_estimate=inf,
        attained=False,
    )


def _check_constraint(m: float, v: float) -> None:
    if not -1.0 < m < 1.0:
        raise InfeasibleConstraint(f"mean {m!r} is not inside (-1, 1)")
    if not v >= 0.0:
        raise InfeasibleConstraint(f"variance {v!r} is negative")
    if v >= (1.0 - m) * (1.0 + m):
        raise InfeasibleConstraint(f"variance {v!r} is not below 1 - m^2 = {(1.0 - m) * (1.0 + m)!r}")


def _x1_upper(m: float, v: float) -> float:
    # the partner atom m + v/(m - x1) stays below 1 exactly when x1 < this
    return m - v / (1.0 - m)


def two_point_family(m: float, v: float, x1: float) -> Measure:
    """The two-atom measure with mean ``m``, variance ``v`` and left atom ``x1``.

    The right atom is ``x2 = m + v/(m - x1)`` and the weight at ``x1`` is
    ``p = v/(v + (m - x1)**2)``.
    """
    _check_constraint(m, v)
    if v == 0.0:
        raise InfeasibleConstraint("the two-point family needs v > 0")
    if not -1.0 < x1 < _x1_upper(m, v):
        raise X1OutOfRange(f"x1 {x1!r} is not inside (-1, {_x1_upper(m, v)!r})")
    d = m - x1
    x2 = m + v / d
    if not x2 < 1.0:
        raise X1OutOfRange(f"x1 {x1!r} pushes the right atom to {x2!r}")
    p = v / (v + d * d)
    return make_atomic([x1, x2], [p, 1.0 - p])


def _two_point_curve(m: float, v: float, x1: np.ndarray):
    d = m - x1
    x2 = m + v / d
    p = v / (v + d * d)
    S = p / (1.0 - x1) + (1.0 - p) / (1.0 - x2)
    ok = (x1 > -1.0) & (x2 < 1.0)
    return x1[ok], x2[ok], p[ok], S[ok]


def _applicable_bounds(m: float, v: float) -> tuple[float, float | None]:
    return bound1(m, v), bound2(1.0 - m, v)


def _assert_dominates(inf: float, b1: float, b2: float | None, where: str) -> None:
    floor = b1 if b2 is None else max(b1, b2)
    if inf < floor - ORACLE_TOL:
        raise OracleViolation(f"{where}: infimum estimate {inf!r} below lower bound {floor!r}")


def _dirac_scan(m: float, v: float, family: str, columns: tuple[str, ...]) -> ExtremalScan:
    mu = dirac(m)
    S = geometric_sum(mu)
    row = [m, m, m, 1.0, 0.0, 0.0] if family == "three_atom" else [m, m, 1.0]
    b1, b2 = _applicable_bounds(m, v)
    return ExtremalScan((m, v), family, columns, np.array([row + [S]]), S, True, b1, b2, mu)


def _x1_grid(m: float, v: float, n: int) -> tuple[np.ndarray, float, float]:
    upper = _x1_upper(m, v)
    width = upper + 1.0
    offsets = np.geomspace(width * 1e-12, width * (1.0 - 1e-6), n)
    return -1.0 + offsets, upper, width


_TWO_POINT_COLUMNS = ("x1", "x2", "p", "S")


def sharp_scan(m: float, v: float, grid_size: int) -> ExtremalScan:
    """Scan the two-point family with mean ``m`` and variance ``v``.

    The left atom runs over a grid that is geometric toward -1, where the
    infimum usually sits as a boundary limit. ``attained`` is False when
    the best sample lies in the outer 1% of the feasible interval.
    """
    _check_constraint(m, v)
    if int(grid_size) != grid_size or grid_size < 10:
        raise InvalidInput(f"grid_size must be an integer >= 10, got {grid_size!r}")
    if v == 0.0:
        return _dirac_scan(m, v, "two_point", _TWO_POINT_COLUMNS)
    x1, upper, width = _x1_grid(m, v, int(grid_size))
    x1, x2, p, S = _two_point_curve(m, v, x1)
    k = int(np.argmin(S))
    best = two_point_family(m, v, float(x1[k]))
    inf = geometric_sum(best)
    edge = EDGE_FRACTION * width
    attained = bool(x1[k] + 1.0 >= edge and upper - x1[k] >= edge)
    b1, b2 = _applicable_bounds(m, v)
    _assert_dominates(inf, b1, b2, "sharp_scan")
    rows = np.column_stack([x1, x2, p, S])
    return ExtremalScan((m, v), "two_point", _TWO_POINT_COLUMNS, rows, inf, attained, b1, b2, best)


def _three_atom_weights(m: float, v: float, X: np.ndarray) -> np.ndarray:
    """Weights matching mass 1, mean m and variance v for atom triples ``X``.

    Lagrange form in coordinates centred at the mean:
    ``w_a = (v + y_b y_c) / ((y_a - y_b)(y_a - y_c))``.
    """
    Y = X - m
    W = np.empty_like(Y)
    for a, b, c in ((0, 1, 2), (1, 0, 2), (2, 0, 1)):
        W[:, a] = (v + Y[:, b] * Y[:, c]) / ((Y[:, a] - Y[:, b]) * (Y[:, a] - Y[:, c]))
    return W


def _evaluate_triples(m: float, v: float, X: np.ndarray):
    W = _three_atom_weights(m, v, X)
    ok = np.all(W >= -WEIGHT_TOL, axis=1) & np.all(np.isfinite(W), axis=1)
    X, W = X[ok], np.maximum(W[ok], 0.0)
    S = np.sum(W / (1.0 - X), axis=1)
    return X, W, S


def _golden_min(func, a: float, b: float, tol: float) -> float:
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = func(x1), func(x2)
    while b - a > tol:
        if f1 > f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = func(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = func(x1)
    return 0.5 * (a + b)


_THREE_ATOM_COLUMNS = ("x1", "x2", "x3", "w1", "w2", "w3", "S")


def three_atom_search(m: float, v: float, grid_size: int, refine: int = 9) -> ExtremalScan:
    """Brute-force minimum of ``S`` over measures with at most three atoms.

    Atom triples come from a Chebyshev-spaced grid of ``grid_size`` nodes
    on (-1, 1); the weights are solved from the mass, mean and second
    moment constraints and triples with a negative weight are discarded.
    The best cell is refined once on a ``refine``-point subgrid per
    coordinate. Two-atom measures (one weight zero) are part of the search
    space, so the two-point family is scanned as well and refined by
    golden-section search around its best sample.
    """
    _check_constraint(m, v)
    if int(grid_size) != grid_size or grid_size < 3:
        raise InvalidInput(f"grid_size must be an integer >= 3, got {grid_size!r}")
    if v == 0.0:
        return _dirac_scan(m, v, "three_atom", _THREE_ATOM_COLUMNS)
    n = int(grid_size)
    nodes = -np.cos(np.pi * (np.arange(n) + 0.5) / n)
    idx = np.array(list(itertools.combinations(range(n), 3)), dtype=np.int64)
    X, W, S = _evaluate_triples(m, v, nodes[idx])

    blocks_X, blocks_W, blocks_S = [X], [W], [S]
    if S.size:
        k = int(np.argmin(S))
        centre = np.searchsorted(nodes, X[k])
        axes = []
        for i in centre:
            lo = nodes[i - 1] if i > 0 else 0.5 * (nodes[0] - 1.0)
            hi = nodes[i + 1] if i < n - 1 else 0.5 * (nodes[-1] + 1.0)
            axes.append(np.linspace(lo, hi, refine))
        fine = np.array([t for t in itertools.product(*axes) if t[0] < t[1] < t[2]])
        if fine.size:
            Xf, Wf, Sf = _evaluate_triples(m, v, fine)
            blocks_X.append(Xf)
            blocks_W.append(Wf)
            blocks_S.append(Sf)

    # two-atom subset: third weight zero
    x1_grid, upper, width = _x1_grid(m, v, max(n * n, 1000))
    x1, x2, p, S2 = _two_point_curve(m, v, x1_grid)
    k = int(np.argmin(S2))
    lo = x1[k - 1] if k > 0 else -1.0 + 0.5 * (x1[0] + 1.0)
    hi = x1[k + 1] if k < x1.size - 1 else x1[k]

    def two_point_S(t: float) -> float:
        return float(_two_point_curve(m, v, np.array([t]))[3][0])

    t = _golden_min(two_point_S, float(lo), float(hi), 1e-13 * max(width, 1e-300))
    candidates = [float(x1[k]), t]
    best_t = min(candidates, key=two_point_S)
    bx1, bx2, bp, bS = (float(a[0]) for a in _two_point_curve(m, v, np.array([best_t])))
    blocks_X.append(np.array([[bx1, bx2, bx2]]))
    blocks_W.append(np.array([[bp, 1.0 - bp, 0.0]]))
    blocks_S.append(np.array([bS]))

    X = np.concatenate(blocks_X)
    W = np.concatenate(blocks_W)
    S = np.concatenate(blocks_S)
    k = int(np.argmin(S))
    best = make_atomic(X[k].tolist(), W[k].tolist())
    inf = geometric_sum(best)
    support = np.array(best.atoms)
    edge = EDGE_FRACTION * 2.0
    attained = bool(np.all(support + 1.0 >= edge) and np.all(1.0 - support >= edge))
    b1, b2 = _applicable_bounds(m, v)
    _assert_dominates(inf, b1, b2, "three_atom_search")
    rows = np.column_stack([X, W, S])
    return ExtremalScan((m, v), "three_atom", _THREE_ATOM_COLUMNS, rows, inf, attained, b1, b2, best)
