"""Seeded random measures and bulk property sweeps.

Random numbers come from SplitMix64 so that the sweep is reproducible
across platforms and languages. One step of the generator is::

    state = (state + 0x9E3779B97F4A7C15) mod 2**64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2**64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) mod 2**64
    output z ^ (z >> 31)

Trial ``i`` of a sweep with seed ``seed`` draws from a generator whose
initial state is ``mix((seed + (i + 1) * 0x9E3779B97F4A7C15) mod 2**64)``,
``mix`` being the output function above. Floats use the top 53 bits.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import bounds
from .errors import InvalidInput
from .measures import Measure, make_atomic, summarize, tail_bound

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB
_TWO_M53 = 2.0 ** -53


def mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MUL1) & MASK64
    z = ((z ^ (z >> 27)) * _MUL2) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Minimal SplitMix64 stream."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    @classmethod
    def for_trial(cls, seed: int, index: int) -> "SplitMix64":
        return cls(mix64((seed + (index + 1) * GAMMA) & MASK64))

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return mix64(self.state)

    def uniform(self) -> float:
        """Float in [0, 1)."""
        return (self.next_u64() >> 11) * _TWO_M53

    def uniform_open(self) -> float:
        """Float in (0, 1)."""
        return ((self.next_u64() >> 11) + 0.5) * _TWO_M53

    def below(self, n: int) -> int:
        """Integer in [0, n); the bias is below 2**-53 * n."""
        return int(self.uniform() * n)


MODES = ("uniform", "dirac", "tiny_variance", "high")
TINY_SEPARATION = 1e-6
HIGH_LOW = 0.9


def _simplex(rng: SplitMix64, k: int) -> list[float]:
    # symmetric Dirichlet(1, ..., 1) from sorted uniform spacings; no libm calls
    cuts = sorted(rng.uniform() for _ in range(k - 1))
    edges = [0.0, *cuts, 1.0]
    return [b - a for a, b in zip(edges, edges[1:])]


def random_measure(rng: SplitMix64, max_atoms: int, atom_margin: float, mode: str = "uniform") -> Measure:
    """Draw a measure from ``rng``.

    Modes: ``uniform`` (1..max_atoms atoms uniform on
    [-1 + margin, 1 - margin], symmetric simplex weights), ``dirac`` (one
    atom), ``tiny_variance`` (two atoms 1e-6 apart, so v < 1e-10) and
    ``high`` (uniform mode restricted to [0.9, 1 - margin]).
    """
    lo, hi = -1.0 + atom_margin, 1.0 - atom_margin
    if mode == "dirac" or (mode == "uniform" and max_atoms == 1):
        return make_atomic([lo + (hi - lo) * rng.uniform()], [1.0])
    if mode == "tiny_variance":
        left = lo + (hi - TINY_SEPARATION - lo) * rng.uniform()
        return make_atomic([left, left + TINY_SEPARATION], _simplex(rng, 2))
    if mode == "high":
        lo = max(lo, HIGH_LOW)
    elif mode != "uniform":
        raise InvalidInput(f"unknown mode {mode!r}")
    k = 1 + rng.below(max_atoms)
    atoms = [lo + (hi - lo) * rng.uniform() for _ in range(k)]
    weights = _simplex(rng, k)
    if all(w == 0.0 for w in weights):
        weights = [1.0] * k
    return make_atomic(atoms, weights)


@dataclass(frozen=True)
class Tolerances:
    """Absolute slacks per invariant (``relative`` ones scale with the values)."""

    bound: float = 1e-12
    strict_gap: float = 1e-10
    strict_variance: float = 1e-6
    chain_identity: float = 1e-12
    chain_order_relative: float = 1e-12
    F_relative: float = 1e-12
    argmax: float = 1e-8
    tail: float = 1e-12
    variance_feasible: float = 1e-12
    mass: float = 1e-12


@dataclass(frozen=True)
class SweepConfig:
    seed: int
    trials: int
    max_atoms: int = 8
    atom_margin: float = 1e-3
    tolerances: Tolerances = field(default_factory=Tolerances)
    forced_coverage: bool = True
    n_centers: int = 10
    argmax_every: int = 20
    tail_order: int = 50

    def __post_init__(self):
        if int(self.trials) != self.trials or self.trials < 1:
            raise InvalidInput(f"trials must be a positive integer, got {self.trials!r}")
        if int(self.max_atoms) != self.max_atoms or self.max_atoms < 1:
            raise InvalidInput(f"max_atoms must be a positive integer, got {self.max_atoms!r}")
        if not 0.0 < self.atom_margin < 1.0:
            raise InvalidInput(f"atom_margin must be inside (0, 1), got {self.atom_margin!r}")
        if not 0 <= self.seed <= MASK64:
            raise InvalidInput(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")


def trial_mode(config: SweepConfig, index: int) -> str:
    """Generator mode of trial ``index``; every block of 1000 trials covers each mode."""
    if not config.forced_coverage:
        return "uniform"
    return {0: "dirac", 1: "tiny_variance", 2: "high"}.get(index % 1000, "uniform")


INVARIANTS = (
    "measure_valid",
    "bound1_holds",
    "bound1_above_half",
    "bound2_holds",
    "bound2_strict",
    "ec2",
    "ec2_strict",
    "EA_unit",
    "EUA2_expansion",
    "schwarz",
    "chain_order_S",
    "chain_order_bound2",
    "F_below_S",
    "argmax",
    "tail_bound",
    "variance_feasible",
)

COUNTERS = (
    "dirac",
    "tiny_variance",
    "high_mode",
    "bound2_applicable",
    "bound2_inapplicable",
    "strict_checked",
    "argmax_checked",
)


@dataclass
class SweepReport:
    trials_run: int
    violations: list[tuple[int, str, float]]
    worst_slack: dict[str, float]
    counters: dict[str, int]
    elapsed: float

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self, include_elapsed: bool = True) -> dict:
        d = asdict(self)
        d["violations"] = [list(v) for v in self.violations]
        if not include_elapsed:
            del d["elapsed"]
        return d

    def to_json(self, include_elapsed: bool = True) -> str:
        return json.dumps(self.to_dict(include_elapsed), indent=2)


def check_measure(mu: Measure, rng: SplitMix64, config: SweepConfig, check_argmax: bool):
    """Evaluate every invariant on one measure.

    Returns ``(slacks, counters)``: the slack of an invariant is how much room
    it had (``>= 0`` means it held), and the counters record which branches
    the measure exercised.
    """
    tol = config.tolerances
    slack: dict[str, float] = {}
    counts: dict[str, int] = {}

    x, w = mu.x, mu.w
    mass_err = abs(math.fsum(w.tolist()) - 1.0)
    valid = min(float(np.min(w)), 1.0 - float(np.max(np.abs(x))), tol.mass - mass_err)
    slack["measure_valid"] = valid

    summary = summarize(mu, config.tail_order)
    m, v, s, S = summary.m, summary.v, summary.s, summary.S_exact
    if v == 0.0:
        counts["dirac"] = 1
    elif v < 1e-10:
        counts["tiny_variance"] = 1

    slack["variance_feasible"] = (1.0 - m) * (1.0 + m) + tol.variance_feasible - v

    b1 = bounds.bound1(m, v)
    slack["bound1_holds"] = S - b1 + tol.bound
    slack["bound1_above_half"] = b1 - 0.5

    b2 = bounds.bound2(s, v)
    chain = bounds.schwarz_chain(mu)
    if b2 is None:
        counts["bound2_inapplicable"] = 1
    else:
        counts["bound2_applicable"] = 1
        slack["bound2_holds"] = S - b2 + tol.bound
        if v > tol.strict_variance:
            counts["strict_checked"] = 1
            slack["bound2_strict"] = (S - b2) - tol.strict_gap
        inv = 1.0 / chain.EUA2
        slack["chain_order_bound2"] = inv - b2 + tol.chain_order_relative * b2

    lhs, rhs, strict = bounds.ec2_check(mu)
    slack["ec2"] = rhs - lhs + tol.bound
    if strict:
        # strictness has no slack: the inequality itself must be strict
        slack["ec2_strict"] = rhs - lhs if rhs > lhs else -abs(rhs - lhs) - 1e-300

    slack["EA_unit"] = tol.chain_identity - abs(chain.EA - 1.0)
    slack["EUA2_expansion"] = tol.chain_identity - abs(chain.expansion_residual)
    product = chain.E_inv_U * chain.EUA2
    slack["schwarz"] = product - chain.EA ** 2 + tol.chain_order_relative * product
    inv = 1.0 / chain.EUA2
    slack["chain_order_S"] = S - inv + tol.chain_order_relative * S

    worst_F = math.inf
    for _ in range(config.n_centers):
        c = -1.0 + 2.0 * rng.uniform_open()
        F = bounds.eval_F(c, m, v)
        worst_F = min(worst_F, S - F + tol.F_relative * max(1.0, abs(S), abs(F)))
    slack["F_below_S"] = worst_F

    if check_argmax:
        counts["argmax_checked"] = 1
        slack["argmax"] = tol.argmax - abs(bounds.argmax_F(m, v) - m)

    N = config.tail_order
    partial = math.fsum(summary.moments[: N + 1])
    slack["tail_bound"] = tail_bound(summary.r, N) + tol.tail - abs(partial - S)
    return slack, counts


def property_sweep(config: SweepConfig) -> SweepReport:
    """Check every invariant on ``config.trials`` seeded random measures.

    Violations are data: the report lists them (sorted by trial index) and
    records the smallest slack seen per invariant.
    """
    start = time.perf_counter()
    violations: list[tuple[int, str, float]] = []
    worst = {name: math.inf for name in INVARIANTS}
    counters = {name: 0 for name in COUNTERS}
    for i in range(config.trials):
        rng = SplitMix64.for_trial(config.seed, i)
        mode = trial_mode(config, i)
        if mode == "high":
            counters["high_mode"] += 1
        mu = random_measure(rng, config.max_atoms, config.atom_margin, mode)
        slack, counts = check_measure(mu, rng, config, i % config.argmax_every == 0)
        for name, value in counts.items():
            counters[name] += value
        for name, value in slack.items():
            if value < worst[name]:
                worst[name] = value
            if not value >= 0.0:
                violations.append((i, name, value))
    violations.sort(key=lambda t: (t[0], INVARIANTS.index(t[1])))
    worst_slack = {k: (None if math.isinf(val) else val) for k, val in worst.items()}
    return SweepReport(
        trials_run=config.trials,
        violations=violations,
        worst_slack=worst_slack,
        counters=counters,
        elapsed=time.perf_counter() - start,
    )
