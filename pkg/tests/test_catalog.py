#!/usr/bin/env python
import math
import unittest

import numpy as np

import respoly
from respoly.catalog import CheckResult, bound_checks, random_problem, root_asymptotics


class Test(unittest.TestCase):
    def test_period_set(self):
        quadratic = respoly.Polynomial.from_monomial([-2.0, 0.0, 2.0], -2.0, 2.0)
        s = respoly.period_set(quadratic)
        assert s.m == 2
        (a, b), (c, d) = s.intervals
        assert abs(a + math.sqrt(1.5)) < 1e-12 and abs(b + math.sqrt(0.5)) < 1e-12
        assert abs(c - math.sqrt(0.5)) < 1e-12 and abs(d - math.sqrt(1.5)) < 1e-12
        with self.assertRaises(respoly.InvalidInputError):
            respoly.period_set(respoly.Polynomial.constant(0.5, -1.0, 1.0))

    def test_closed_form_instances(self):
        for inst in respoly.closed_form_instances():
            sol = respoly.solve_residual(inst.problem, inst.n)
            assert abs(sol.r - inst.r) <= 1e-9 * inst.r, inst.name
            if inst.d_n is not None:
                assert sol.d_n == inst.d_n, inst.name

    def test_examples_pass(self):
        results = respoly.run_examples()
        assert results
        assert all(isinstance(r, CheckResult) for r in results)
        failed = [r.name for r in results if not r.passed]
        assert failed == [], failed

    def test_random_problem(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            prob = random_problem(rng)
            assert prob.set.m in (2, 3)
            assert 0.0 <= prob.set.lower and prob.set.upper <= 1.0
            assert not prob.set.contains(prob.x0)

    def test_random_problems_are_seeded(self):
        a = random_problem(np.random.default_rng(3))
        b = random_problem(np.random.default_rng(3))
        assert a == b

    def test_unknown_suite(self):
        with self.assertRaises(respoly.InvalidInputError):
            respoly.run_suite("nightly")

    def test_bound_suite_to_degree_twenty(self):
        results = bound_checks(3, 20, seed=0)
        failed = [r.name for r in results if not r.passed]
        assert failed == [], failed

    def test_root_asymptotics(self):
        results = root_asymptotics()
        failed = [r.name for r in results if not r.passed]
        assert failed == [], failed
