"""Lower bounds on the geometric moment sum of measures on (-1, 1).

For a probability measure mu on (-1, 1) with moments a_n, mean m and
variance v, the sum ``S = sum_n a_n = E[1/(1 - x)]`` satisfies::

    S >= 1/(1 - m) + v/8 > 1/2
    S >= 1/(s - v/2),  s = 1 - m

The package computes both bounds, every intermediate quantity of their
derivations, and brute-force oracles to test them against.
"""
from .bounds import (
    BoundReport,
    QuadMinorant,
    SchwarzChain,
    argmax_F,
    bound1,
    bound2,
    ec2_check,
    eval_F,
    minorant_at,
    minorant_gap,
    report,
    schwarz_chain,
)
from .errors import *  # noqa: F401,F403
from .extremal import (
    ExtremalScan,
    epsilon_family,
    epsilon_sweep,
    sharp_scan,
    three_atom_search,
    two_point_family,
)
from .kernels import BACKEND
from .measures import (
    Measure,
    MomentSummary,
    dirac,
    discretize_density,
    geometric_sum,
    make_atomic,
    moment,
    partial_sum,
    summarize,
)
from .verify import SplitMix64, SweepConfig, SweepReport, property_sweep, random_measure

__version__ = "0.1.0"
