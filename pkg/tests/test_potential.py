#!/usr/bin/env python
import cmath
import math
import pickle
import unittest

import respoly
from respoly.potential import density, gap_integral, is_infinite
from respoly.realset import gaps

LOG3 = math.log(3.0)


def interval():
    return respoly.validate_set([[-1, 1]])


def pair():
    return respoly.validate_set([[-2, -1], [1, 2]])


def interval_green(z):
    w = z + cmath.sqrt(z - 1) * cmath.sqrt(z + 1)
    return abs(math.log(abs(w)))


class Test(unittest.TestCase):
    def test_capacities(self):
        assert abs(respoly.equilibrium(interval()).capacity - 0.5) < 1e-9
        assert abs(respoly.equilibrium(respoly.validate_set([[0, 1]])).capacity - 0.25) < 1e-9
        assert abs(respoly.equilibrium(pair()).capacity - math.sqrt(3) / 2) < 1e-9

    def test_capacity_scales(self):
        s = respoly.validate_set([[0, 1], [2, 3], [4, 5]])
        c = respoly.equilibrium(s).capacity
        assert abs(respoly.equilibrium(respoly.affine(s, 3, 1)).capacity - 3 * c) < 1e-8 * c

    def test_interval_green(self):
        gd = respoly.equilibrium(interval())
        assert abs(respoly.green(gd, 2.0) - math.log(2 + math.sqrt(3))) < 1e-9
        for z in (0.3 + 0.7j, -1.5 + 0.1j, 5j):
            assert abs(respoly.green(gd, z) - interval_green(z)) < 1e-9

    def test_green_next_to_an_endpoint(self):
        gd = respoly.equilibrium(interval())
        for x in (1 + 1e-10, -1 - 1e-6, 1.0 + 1e-3):
            g = respoly.green(gd, x)
            assert math.isfinite(g)
            assert abs(g - math.acosh(abs(x))) < 1e-9
        g = respoly.green(respoly.equilibrium(pair()), -1 + 1e-8)
        assert 0 < g < 1e-3

    def test_green_on_set_and_infinity(self):
        gd = respoly.equilibrium(pair())
        assert respoly.green(gd, 1.5) == 0.0
        assert respoly.green(gd, -2.0) == 0.0
        assert respoly.green(gd, respoly.INFINITY) == math.inf

    def test_two_interval_green(self):
        gd = respoly.equilibrium(pair())
        assert abs(respoly.green(gd, 0.0) - 0.5 * LOG3) < 1e-8
        assert abs(respoly.green(gd, 1 + 2j) - respoly.green(gd, 1 - 2j)) < 1e-12
        assert abs(respoly.green(gd, 1 + 2j) - respoly.green(gd, -1 + 2j)) < 1e-8

    def test_domain_monotonicity(self):
        big = respoly.equilibrium(respoly.validate_set([[-2, 2]]))
        small = respoly.equilibrium(pair())
        for z in (3.0, 0.5j, 2 + 1j):
            assert respoly.green(small, z) >= respoly.green(big, z) - 1e-10

    def test_equilibrium_measure(self):
        gd = respoly.equilibrium(pair())
        assert len(gd.q_roots) == 1
        assert abs(gd.q_roots[0]) < 1e-12
        assert all(abs(m - 0.5) < 1e-9 for m in gd.masses)
        assert abs(gap_integral(gd, gaps(pair())[0])) < 1e-10

        line = respoly.equilibrium(interval())
        assert line.q_roots == ()
        assert abs(density(line, 0.0) - 1 / math.pi) < 1e-12
        assert density(line, 3.0) == 0.0

    def test_harmonic_measure(self):
        assert abs(respoly.harmonic_measure(respoly.equilibrium(interval()), (-1, 0)) - 0.5) < 1e-9
        gd = respoly.equilibrium(pair())
        assert abs(respoly.harmonic_measure(gd, (1, 2)) - 0.5) < 1e-9
        with self.assertRaises(respoly.InvalidInputError):
            respoly.harmonic_measure(gd, (0, 1.5))

    def test_three_bands(self):
        s = respoly.validate_set([[0, 1], [2, 3], [4, 5]])
        gd = respoly.equilibrium(s)
        assert len(gd.q_roots) == 2
        assert 1 < gd.q_roots[0] < 2 and 3 < gd.q_roots[1] < 4
        assert abs(sum(gd.masses) - 1.0) < 1e-10
        assert abs(gd.masses[0] - gd.masses[2]) < 1e-9

    def test_pole_at_finite_point(self):
        s = interval()
        assert abs(respoly.green_pole(s, respoly.INFINITY, 2.0) - math.log(2 + math.sqrt(3))) < 1e-9
        assert respoly.critical_points(s, 2.0) == []
        assert respoly.pw_constant(s, 2.0) == 0.0
        with self.assertRaises(respoly.InvalidInputError):
            respoly.green_pole(s, 2.0, 2.0)

    def test_pole_symmetry(self):
        s = pair()
        for z, x0 in ((0.0, 3.0), (0.5, -4.0), (-0.3, 0.7)):
            assert abs(respoly.green_pole(s, z, x0) - respoly.green_pole(s, x0, z)) < 1e-8

    def test_critical_point_at_infinity(self):
        pd = respoly.pole_data(pair(), 0.0)
        assert pd.critical_points == (respoly.INFINITY,)
        assert pd.at_infinity
        assert abs(pd.pw - 0.5 * LOG3) < 1e-8
        assert abs(pd.g_at_x0 - 0.5 * LOG3) < 1e-8
        assert pd.to_dict()["critical_points"] == ["inf"]

    def test_critical_points_per_gap(self):
        s = respoly.validate_set([[0, 1], [2, 3], [4, 5]])
        points = respoly.critical_points(s, 1.5)
        assert len(points) == 2
        finite = [c for c in points if not is_infinite(c)]
        assert any(3 < c < 4 for c in finite)
        outer = [c for c in points if is_infinite(c) or c > 5 or c < 0]
        assert len(outer) == 1
        assert respoly.pw_constant(s, 1.5) > 0

    def test_infinity_pickles(self):
        assert pickle.loads(pickle.dumps(respoly.INFINITY)) is respoly.INFINITY
        assert is_infinite(respoly.INFINITY)
        assert is_infinite(math.inf)
        assert not is_infinite(2.0)
