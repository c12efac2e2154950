import io
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momentbounds import errors
from momentbounds.bounds import bound1, bound2
from momentbounds.extremal import (
    epsilon_family,
    epsilon_sweep,
    sharp_scan,
    three_atom_search,
    two_point_family,
)
from momentbounds.measures import geometric_sum, mean_variance


def S_eps_exact(eps):
    eps = Fraction(eps)
    return (1 - eps) / (2 - eps) + eps


def two_point_exact(m, v, x1):
    m, v, x1 = Fraction(m), Fraction(v), Fraction(x1)
    x2 = m + v / (m - x1)
    p = v / (v + (m - x1) ** 2)
    return x2, p, p / (1 - x1) + (1 - p) / (1 - x2)


class TestEpsilonFamily:
    def test_half(self):
        mu = epsilon_family(0.5)
        assert mu.atoms == (-0.5, 0.0) and mu.weights == (0.5, 0.5)

    def test_tenth(self):
        assert geometric_sum(epsilon_family(0.1)) == pytest.approx(float(S_eps_exact(0.1)), abs=1e-15)

    def test_limit_is_half(self):
        for eps in (1e-3, 1e-6, 1e-9):
            assert 0 < geometric_sum(epsilon_family(eps)) - 0.5 < eps

    @pytest.mark.parametrize("eps", [0.0, 1.0, -0.1, 1.5])
    def test_out_of_range(self, eps):
        with pytest.raises(errors.EpsOutOfRange):
            epsilon_family(eps)


class TestEpsilonSweep:
    def test_hundredth(self):
        scan = epsilon_sweep([0.01])
        assert scan.column("S_minus_half")[0] == pytest.approx(float(S_eps_exact(0.01) - Fraction(1, 2)), abs=1e-15)
        assert scan.column("S_minus_half")[0] == pytest.approx(0.0074874371859296, abs=1e-12)

    def test_tiny(self):
        excess = epsilon_sweep([1e-6]).column("S_minus_half")[0]
        assert 0 < excess < 1e-6

    def test_decreasing(self):
        S = epsilon_sweep([0.5, 0.1, 0.01]).column("S")
        assert S[0] > S[1] > S[2]

    def test_first_order_coefficient(self):
        eps = np.geomspace(1e-2, 1e-7, 12)
        scan = epsilon_sweep(eps)
        ratio = scan.column("S_minus_half") / eps
        assert np.all(np.abs(ratio - 0.75) <= eps / 4 + 1e-9)
        assert np.all(np.diff(scan.column("S")) < 0)

    @given(st.floats(min_value=1e-9, max_value=0.01))
    def test_excess_bracket(self, eps):
        excess = epsilon_sweep([eps]).column("S_minus_half")[0]
        assert 0 < excess < eps

    def test_propagates_range_error(self):
        with pytest.raises(errors.EpsOutOfRange):
            epsilon_sweep([0.1, 1.5])

    def test_csv(self):
        buf = io.StringIO()
        epsilon_sweep([0.1]).write_csv(buf)
        header, row = buf.getvalue().splitlines()
        assert header == "eps,S,S_minus_half"
        assert [float(t) for t in row.split(",")][1] == geometric_sum(epsilon_family(0.1))


class TestTwoPointFamily:
    def test_symmetric(self):
        mu = two_point_family(0.0, 0.25, -0.5)
        assert mu.atoms == (-0.5, 0.5) and mu.weights == (0.5, 0.5)
        assert geometric_sum(mu) == pytest.approx(4 / 3, abs=1e-15)

    def test_left_atom_minus_point_nine(self):
        mu = two_point_family(0.0, 0.25, -0.9)
        x2, p, S = two_point_exact(0.0, 0.25, -0.9)
        assert mu.atoms[1] == pytest.approx(float(x2), abs=1e-15)
        assert mu.weights[0] == pytest.approx(float(p), abs=1e-15)
        assert geometric_sum(mu) == pytest.approx(float(S), abs=1e-14)
        assert geometric_sum(mu) == pytest.approx(1.1821862348, abs=1e-10)

    def test_boundary_limit(self):
        # p -> 0.2, x2 -> 0.25 as x1 -> -1, so S -> 0.1 + 0.8/0.75 = 7/6
        S = geometric_sum(two_point_family(0.0, 0.25, -1 + 1e-12))
        assert S == pytest.approx(7 / 6, abs=1e-11)
        assert S > 7 / 6

    def test_errors(self):
        with pytest.raises(errors.InfeasibleConstraint):
            two_point_family(0.0, 1.0, -0.5)
        with pytest.raises(errors.InfeasibleConstraint):
            two_point_family(0.0, 0.0, -0.5)
        with pytest.raises(errors.X1OutOfRange):
            two_point_family(0.0, 0.25, -0.2)  # upper end is m - v/(1-m) = -0.25
        with pytest.raises(errors.X1OutOfRange):
            two_point_family(0.0, 0.25, -1.0)

    @settings(max_examples=300)
    @given(st.floats(-0.95, 0.95), st.floats(0.01, 0.99), st.floats(1e-6, 1 - 1e-6))
    def test_constraint_fidelity(self, m, t, frac):
        v = t * (1 - m) * (1 + m)
        upper = m - v / (1 - m)
        x1 = -1 + frac * (upper + 1)
        try:
            mu = two_point_family(m, v, x1)
        except errors.X1OutOfRange:
            return  # x2 rounds onto 1
        mean, var = mean_variance(mu)
        assert abs(mean - m) <= 1e-12 and abs(var - v) <= 1e-12


class TestSharpScan:
    def test_symmetric_constraint(self):
        scan = sharp_scan(0.0, 0.25, 10000)
        assert scan.inf_estimate == pytest.approx(7 / 6, abs=1e-6)
        assert scan.inf_estimate >= 7 / 6
        assert not scan.attained
        assert scan.bound1 == 1.03125 and scan.bound2 == pytest.approx(8 / 7)
        assert scan.bound1 < scan.bound2 < scan.inf_estimate

    def test_dirac_constraint(self):
        scan = sharp_scan(0.5, 0.0, 10)
        assert scan.inf_estimate == 2.0 == scan.bound1
        assert scan.attained

    def test_epsilon_half_constraint(self):
        scan = sharp_scan(-0.25, 0.0625, 10000)
        assert scan.inf_estimate >= bound1(-0.25, 0.0625) == pytest.approx(0.8078125)
        assert scan.inf_estimate <= 5 / 6  # the measure itself is in the family

    def test_samples_match_family(self):
        scan = sharp_scan(0.1, 0.3, 50)
        for (x1, x2, p), S in scan.samples[::7]:
            mu = two_point_family(0.1, 0.3, x1)
            assert geometric_sum(mu) == pytest.approx(S, rel=1e-12)
            mean, var = mean_variance(mu)
            assert abs(mean - 0.1) <= 1e-12 and abs(var - 0.3) <= 1e-12

    def test_best_measure_fidelity(self):
        scan = sharp_scan(-0.4, 0.5, 2000)
        mean, var = mean_variance(scan.best)
        assert abs(mean + 0.4) <= 1e-12 and abs(var - 0.5) <= 1e-12

    def test_grid_collected_toward_minus_one(self):
        x1 = sharp_scan(0.0, 0.25, 100).column("x1")
        assert np.sum(x1 < -0.99) > 50

    def test_errors(self):
        with pytest.raises(errors.InfeasibleConstraint):
            sharp_scan(0.0, 1.0, 100)
        with pytest.raises(errors.InvalidInput):
            sharp_scan(0.0, 0.25, 5)

    def test_csv_and_summary(self):
        scan = sharp_scan(0.0, 0.25, 10)
        buf = io.StringIO()
        scan.write_csv(buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "x1,x2,p,S" and len(lines) == 11
        assert set(scan.summary()) == {"inf_estimate", "attained", "bound1", "bound2"}


class TestThreeAtomSearch:
    def test_not_above_two_point(self):
        scan = three_atom_search(0.0, 0.25, 50)
        assert scan.inf_estimate <= 7 / 6 + 1e-9
        assert scan.inf_estimate <= sharp_scan(0.0, 0.25, 10000).inf_estimate + 1e-9

    def test_above_bounds(self):
        scan = three_atom_search(0.0, 0.25, 50)
        assert scan.inf_estimate >= 8 / 7 - 1e-10

    def test_dirac(self):
        assert three_atom_search(0.0, 0.0, 20).inf_estimate == 1.0

    def test_candidates_are_measures_with_constraints(self):
        scan = three_atom_search(0.2, 0.1, 20)
        W = scan.rows[:, 3:6]
        X = scan.rows[:, 0:3]
        assert np.all(W >= 0)
        assert np.allclose(W.sum(axis=1), 1.0, atol=1e-12)
        assert np.allclose((W * X).sum(axis=1), 0.2, atol=1e-12)
        assert np.allclose((W * (X - 0.2) ** 2).sum(axis=1), 0.1, atol=1e-12)
        mean, var = mean_variance(scan.best)
        assert abs(mean - 0.2) <= 1e-12 and abs(var - 0.1) <= 1e-12

    @pytest.mark.parametrize("m,v", [(-0.25, 0.0625), (0.5, 0.2), (-0.8, 0.3), (0.9, 0.01)])
    def test_oracle_dominance(self, m, v):
        two = sharp_scan(m, v, 20000)
        three = three_atom_search(m, v, 30)
        floor = max(bound1(m, v), bound2(1 - m, v))
        assert two.inf_estimate >= floor - 1e-10
        assert three.inf_estimate >= floor - 1e-10
        assert three.inf_estimate <= two.inf_estimate + 1e-9

    def test_infeasible(self):
        with pytest.raises(errors.InfeasibleConstraint):
            three_atom_search(0.5, 0.75, 10)
