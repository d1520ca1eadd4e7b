#!/usr/bin/env python
import dataclasses
import math
import unittest

import respoly
from respoly.bands import LOWER, UPPER, band_invariants, band_measures

LOG3 = math.log(3.0)


def pair():
    return respoly.locate(respoly.validate_set([[-2, -1], [1, 2]]), 0.0)


def line():
    return respoly.locate(respoly.validate_set([[-1, 1]]), 2.0)


def records(prob, ns):
    pd = respoly.pole_data(prob.set, prob.x0)
    return [respoly.widom_factor(prob, respoly.solve_residual(prob, n), pd) for n in ns]


class Test(unittest.TestCase):
    def test_touching_bands(self):
        c2 = respoly.Polynomial.from_monomial([-1.0, 0.0, 2.0], -1.0, 1.0)
        bs = respoly.preimage(c2, 1.0)
        assert bs.d_n == 2
        (a, b), (c, d) = bs.intervals
        assert abs(a + 1) < 1e-12 and abs(b) < 1e-12
        assert abs(c) < 1e-12 and abs(d - 1) < 1e-12
        assert bs.realset.intervals == ((-1.0, 1.0),)

    def test_degree_one_preimage(self):
        p = respoly.Polynomial.from_monomial([1.0, 2.0], -3.0, 3.0)
        bs = respoly.preimage(p, 1.0)
        ((a, b),) = bs.intervals
        assert abs(a + 1) < 1e-12 and abs(b) < 1e-12

    def test_constant_preimage(self):
        bs = respoly.preimage(respoly.Polynomial.constant(1.0, -1.0, 1.0), 1.0)
        assert bs.degenerate
        assert bs.realset is None

    def test_period_set_is_the_set(self):
        sol = respoly.solve_residual(pair(), 2)
        bs = respoly.band_set(sol)
        assert len(bs.intervals) == 2
        for (u, v), (a, b) in zip(bs.intervals, [(-2, -1), (1, 2)]):
            assert abs(u - a) < 1e-9 and abs(v - b) < 1e-9
        assert all(band_invariants(bs, pair()).values())

    def test_interval_bands(self):
        sol = respoly.solve_residual(line(), 3)
        bs = respoly.band_set(sol)
        assert len(bs.intervals) == 3
        assert abs(bs.intervals[0][0] + 1) < 1e-9 and abs(bs.intervals[-1][1] - 1) < 1e-9
        assert all(abs(m - 1 / 3) < 1e-8 for m in band_measures(bs))

    def test_green_period(self):
        sol = respoly.solve_residual(line(), 1)
        assert abs(respoly.green_period(sol, 2.0) - math.log(2 + math.sqrt(3))) < 1e-12
        sol = respoly.solve_residual(pair(), 2)
        assert abs(respoly.green_period(sol, 0.0) - 0.5 * LOG3) < 1e-12
        assert respoly.green_period(sol, 1.5) < 1e-7
        assert respoly.green_period(respoly.solve_residual(pair(), 1), 0.0) == 0.0

    def test_green_period_matches_potential(self):
        prob = respoly.locate(respoly.validate_set([[0, 1], [1.5, 2]]), 1.2)
        sol = respoly.solve_residual(prob, 3)
        gd_n = respoly.equilibrium(respoly.band_set(sol).realset)
        for z in (3.0, 1 + 1j, -0.5):
            assert abs(respoly.green(gd_n, z) - respoly.green_period(sol, z)) < 1e-7
        assert respoly.norm_identity(sol, gd_n) < 1e-7

    def test_norm_identity(self):
        for n in (1, 2, 5):
            assert respoly.norm_identity(respoly.solve_residual(line(), n)) < 1e-10
        assert respoly.norm_identity(respoly.solve_residual(pair(), 2)) < 1e-10
        assert respoly.norm_identity(respoly.solve_residual(pair(), 1)) == 0.0

    def test_widom_factors(self):
        for rec in records(line(), range(1, 8)):
            assert abs(rec.W_n - 2.0) < 1e-8
            assert rec.within_bounds

        two, three = records(pair(), (2, 3))
        assert abs(two.W_n - 2.0) < 1e-8
        assert two.lower_attained
        assert abs(three.W_n - 28 * math.sqrt(3) / 15) < 1e-8
        assert not three.lower_attained
        assert abs(three.upper - 2 * math.sqrt(3)) < 1e-7
        assert three.within_bounds and three.exp_bound_ok and three.cosh_bound_ok

    def test_odd_factors_approach_the_upper_bound(self):
        (rec,) = records(pair(), (41,))
        assert abs(rec.W_n - 2 * math.sqrt(3)) < 0.02
        assert rec.within_bounds

    def test_touching_tolerance_follows_the_levelling(self):
        sol = respoly.solve_residual(pair(), 4)
        # r read off with a relative excess of 1e-7, as a rounding-level solve would
        loose = dataclasses.replace(sol, r=sol.r * (1 + 1e-7), levelling_defect=1e-7)
        bs = respoly.band_set(loose)
        assert len(bs.intervals) == 4
        assert bs.realset.m == 2
        with self.assertRaises(respoly.InvariantViolation):
            respoly.band_set(dataclasses.replace(loose, levelling_defect=0.0))

    def test_unlevelled_solutions_have_no_widom_factor(self):
        prob = pair()
        sol = dataclasses.replace(respoly.solve_residual(prob, 2), converged=False)
        with self.assertRaises(respoly.ConvergenceError):
            respoly.widom_factor(prob, sol, respoly.pole_data(prob.set, prob.x0))

    def test_gap_zeros(self):
        assert respoly.gap_zeros(respoly.solve_residual(pair(), 2), pair().set) == [None, None]
        assert respoly.gap_zeros(respoly.solve_residual(pair(), 1), pair().set) == [None, None]
        prob = respoly.locate(respoly.validate_set([[0, 1], [2, 3], [4, 5]]), 1.5)
        zeros = respoly.gap_zeros(respoly.solve_residual(prob, 4), prob.set)
        assert len(zeros) == 3
        assert all(z is None or not prob.set.contains(z) for z in zeros)

    def test_gap_measures(self):
        bs = respoly.band_set(respoly.solve_residual(pair(), 2))
        assert respoly.gap_measures(bs, pair().set) == [0.0, 0.0]

    def test_gap_contributions(self):
        prob = respoly.locate(respoly.validate_set([[0, 1], [1.5, 2]]), 1.2)
        sol = respoly.solve_residual(prob, 3)
        pd = respoly.pole_data(prob.set, prob.x0)
        contributions, defect = respoly.gap_contributions(sol, pd)
        assert len(contributions) == 2
        assert contributions[0] == 0.0
        assert all(c >= -1e-9 for c in contributions)
        assert defect < 1e-5

    def test_saturation(self):
        prob = pair()
        pd = respoly.pole_data(prob.set, prob.x0)
        recs = records(prob, range(1, 9))

        even = respoly.saturation_diagnostics([r for r in recs if r.n % 2 == 0], pd, prob.set)
        assert even.overall == LOWER
        assert abs(even.liminf_est - 2.0) < 1e-8

        odd = respoly.saturation_diagnostics([r for r in recs if r.n % 2 == 1], pd, prob.set)
        assert odd.overall == UPPER
        assert odd.gaps[0].critical_point is respoly.INFINITY
        assert odd.gaps[0].present_fraction == 1.0
