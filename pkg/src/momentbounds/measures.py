"""Finite atomic probability measures on (-1, 1) and their moments.

Every measure is stored as sorted, deduplicated atoms with normalised
weights. Densities are reduced to atoms by Gauss-Legendre quadrature, so
the geometric moment sum ``S = sum_n a_n = E[1/(1 - x)]`` is always the
finite closed form ``sum_i w_i / (1 - x_i)``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .errors import (
    AtomOutOfRange,
    EmptyMeasure,
    InvalidInput,
    NegativeDensityValue,
    NegativeWeight,
    ZeroMass,
)

MERGE_TOL = 1e-14


@dataclass(frozen=True)
class Measure:
    """Atomic probability measure; build with :func:`make_atomic`."""

    atoms: tuple[float, ...]
    weights: tuple[float, ...]

    @cached_property
    def x(self) -> np.ndarray:
        arr = np.array(self.atoms, dtype=np.float64)
        arr.flags.writeable = False
        return arr

    @cached_property
    def w(self) -> np.ndarray:
        arr = np.array(self.weights, dtype=np.float64)
        arr.flags.writeable = False
        return arr

    def __len__(self) -> int:
        return len(self.atoms)

    @property
    def radius(self) -> float:
        return max(abs(a) for a in self.atoms)

    def expect(self, values) -> float:
        """Compensated ``sum_i w_i * values_i``."""
        return kernels.dot2(self.w, values)


@dataclass(frozen=True)
class MomentSummary:
    moments: tuple[float, ...]
    m: float
    v: float
    s: float
    S_exact: float
    r: float
    n_atoms: int


def make_atomic(atoms: Sequence[float], weights: Sequence[float]) -> Measure:
    """Build a normalised atomic measure.

    Atoms closer than ``MERGE_TOL`` are merged (weights summed), zero-weight
    atoms are dropped and the weights are divided by their total.

    Raises
    ------
    AtomOutOfRange
        If some ``|x_i| >= 1``.
    NegativeWeight
        If some ``w_i < 0``.
    EmptyMeasure
        If there are no atoms or every weight is zero.
    """
    try:
        xs = [float(a) for a in atoms]
        ws = [float(w) for w in weights]
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"atoms and weights must be real numbers: {exc}") from None
    if len(xs) != len(ws):
        raise InvalidInput(f"{len(xs)} atoms but {len(ws)} weights")
    if not xs:
        raise EmptyMeasure("no atoms given")
    for a in xs:
        if not math.isfinite(a) or abs(a) >= 1.0:
            raise AtomOutOfRange(f"atom {a!r} is not inside (-1, 1)")
    for w in ws:
        if not math.isfinite(w):
            raise InvalidInput(f"weight {w!r} is not finite")
        if w < 0.0:
            raise NegativeWeight(f"weight {w!r} is negative")

    order = sorted(range(len(xs)), key=xs.__getitem__)
    merged_x: list[float] = []
    merged_w: list[float] = []
    group_start = None
    for i in order:
        a, w = xs[i], ws[i]
        if group_start is not None and a - group_start <= MERGE_TOL:
            total = merged_w[-1] + w
            if total > 0.0:
                merged_x[-1] = (merged_x[-1] * merged_w[-1] + a * w) / total
            merged_w[-1] = total
        else:
            group_start = a
            merged_x.append(a)
            merged_w.append(w)

    kept = [(a, w) for a, w in zip(merged_x, merged_w) if w > 0.0]
    if not kept:
        raise EmptyMeasure("all weights are zero")
    total = math.fsum(w for _, w in kept)
    return Measure(tuple(a for a, _ in kept), tuple(w / total for _, w in kept))


def dirac(c: float) -> Measure:
    return make_atomic([c], [1.0])


def discretize_density(density: Callable[[np.ndarray], np.ndarray], n_nodes: int) -> Measure:
    """Reduce a density on (-1, 1) to an atomic measure.

    Uses the ``n_nodes``-point Gauss-Legendre rule; the quadrature weights
    are multiplied by the density at the nodes and renormalised to mass one.
    ``density`` may be any callable accepting a numpy array or a float.
    """
    if int(n_nodes) != n_nodes or n_nodes < 2:
        raise InvalidInput(f"n_nodes must be an integer >= 2, got {n_nodes!r}")
    nodes, gl_weights = np.polynomial.legendre.leggauss(int(n_nodes))
    try:
        values = np.asarray(density(nodes), dtype=np.float64)
    except (TypeError, ValueError):
        values = None
    if values is None or values.shape != nodes.shape:
        values = np.array([float(density(float(t))) for t in nodes])
    bad = np.flatnonzero(~(values >= 0.0))
    if bad.size:
        i = int(bad[0])
        raise NegativeDensityValue(f"density is {values[i]!r} at node {nodes[i]!r}")
    mass = gl_weights * values
    if not np.any(mass > 0.0):
        raise ZeroMass("density vanishes at every quadrature node")
    return make_atomic(nodes.tolist(), mass.tolist())


def _uniform(x):
    return np.full_like(np.asarray(x, dtype=np.float64), 0.5)


def _parabolic(x):
    x = np.asarray(x, dtype=np.float64)
    return 0.75 * (1.0 - x * x)


BUILTIN_DENSITIES: dict[str, Callable] = {
    "uniform": _uniform,
    # (3/4)(1 - x^2): has m = 0 and S = 3/2 exactly
    "semicircle-like": _parabolic,
}


def moment(mu: Measure, n: int) -> float:
    """The n-th moment ``sum_i w_i x_i**n``; ``moment(mu, 0)`` is exactly 1."""
    if n < 0 or int(n) != n:
        raise InvalidInput(f"moment order must be a nonnegative integer, got {n!r}")
    if n == 0:
        return 1.0
    return float(kernels.power_moments(mu.x, mu.w, int(n))[-1])


def moments(mu: Measure, n_max: int) -> np.ndarray:
    """Moments ``a_0..a_n_max`` (``a_0`` forced to exactly 1)."""
    out = kernels.power_moments(mu.x, mu.w, int(n_max))
    out[0] = 1.0  # weights are normalised; drop the last-ulp residue
    return out


def geometric_sum(mu: Measure) -> float:
    """Closed-form ``sum_n a_n = sum_i w_i / (1 - x_i)``."""
    return mu.expect(1.0 / (1.0 - mu.x))


def partial_sum(mu: Measure, N: int) -> float:
    """``a_0 + ... + a_N``.

    Differs from :func:`geometric_sum` by at most ``r**(N+1) / (1 - r)``
    with ``r`` the largest ``|x_i|`` (see :func:`tail_bound`).
    """
    if N < 0 or int(N) != N:
        raise InvalidInput(f"N must be a nonnegative integer, got {N!r}")
    return math.fsum(moments(mu, int(N)).tolist())


def tail_bound(r: float, N: int) -> float:
    return r ** (N + 1) / (1.0 - r)


def mean_variance(mu: Measure) -> tuple[float, float]:
    m = mu.expect(mu.x)
    d = mu.x - m
    return m, mu.expect(d * d)


def summarize(mu: Measure, N: int = 2) -> MomentSummary:
    """Moments up to order ``N`` plus mean, variance, ``s = 1 - m`` and ``S``.

    The variance is the compensated centred second moment, which equals
    ``a_2 - a_1**2`` but is exactly zero for a Dirac and never negative.
    """
    if N < 2 or int(N) != N:
        raise InvalidInput(f"summarize needs N >= 2, got {N!r}")
    a = moments(mu, int(N))
    m = float(a[1])
    d = mu.x - m
    v = mu.expect(d * d)
    return MomentSummary(
        moments=tuple(a.tolist()),
        m=m,
        v=v,
        s=1.0 - m,
        S_exact=geometric_sum(mu),
        r=mu.radius,
        n_atoms=len(mu),
    )


def measure_from_dict(obj: dict) -> Measure:
    """Parse the measure file schema.

    Either ``{"atoms": [...], "weights": [...]}`` or
    ``{"density": "uniform" | "semicircle-like", "nodes": n}``.
    """
    if not isinstance(obj, dict):
        raise InvalidInput("measure must be a JSON object")
    if "atoms" in obj or "weights" in obj:
        if "atoms" not in obj or "weights" not in obj:
            raise InvalidInput('measure needs both "atoms" and "weights"')
        atoms, weights = obj["atoms"], obj["weights"]
        if not isinstance(atoms, list) or not isinstance(weights, list):
            raise InvalidInput('"atoms" and "weights" must be lists')
        return make_atomic(atoms, weights)
    if "density" in obj:
        name = obj["density"]
        if name not in BUILTIN_DENSITIES:
            raise InvalidInput(f"unknown density {name!r}; choose from {sorted(BUILTIN_DENSITIES)}")
        nodes = obj.get("nodes", 64)
        if not isinstance(nodes, int) or isinstance(nodes, bool):
            raise InvalidInput('"nodes" must be an integer')
        return discretize_density(BUILTIN_DENSITIES[name], nodes)
    raise InvalidInput('measure needs "atoms"/"weights" or "density"/"nodes"')


def measure_to_dict(mu: Measure) -> dict:
    return {"atoms": list(mu.atoms), "weights": list(mu.weights)}


def load_measure(path) -> Measure:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from None
    return measure_from_dict(obj)


def save_measure(mu: Measure, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(measure_to_dict(mu), fh)
        fh.write("\n")
