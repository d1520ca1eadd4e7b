#!/usr/bin/env python
import unittest

import numpy as np

import respoly
from respoly.oracle import cosine_grid, solve_standard
from respoly.poly import basis_matrix

try:
    from scipy.optimize import linprog

    has_linprog = True
except ImportError:
    has_linprog = False


def oracle(prob, n, points=500):
    return respoly.grid_minimax(respoly.GridProblem.from_problem(prob, n, points))


class Test(unittest.TestCase):
    def test_small_program(self):
        x, y, value = solve_standard([[1.0, 2.0]], [2.0], [1.0, 1.0])
        assert abs(value - 1.0) < 1e-12
        assert np.allclose(x, [0.0, 1.0])
        assert np.allclose(y, [0.5])

    def test_negative_right_hand_side(self):
        x, y, value = solve_standard([[-1.0, -1.0]], [-3.0], [2.0, 1.0])
        assert abs(value - 3.0) < 1e-12
        assert np.allclose(x, [0.0, 3.0])

    def test_infeasible(self):
        with self.assertRaises(respoly.NumericalError):
            solve_standard([[1.0, 1.0]], [-1.0], [1.0, 1.0])

    def test_grid(self):
        s = respoly.validate_set([[-2, -1], [1, 2]])
        grid = cosine_grid(s, 4)
        assert len(grid) == 10
        assert grid[0] == -2.0 and grid[-1] == 2.0
        coarse = set(np.round(cosine_grid(s, 8), 12))
        assert set(np.round(grid, 12)) <= coarse
        with self.assertRaises(respoly.InvalidInputError):
            cosine_grid(s, 0)

    def test_constant(self):
        prob = respoly.locate(respoly.validate_set([[-1, 1]]), 2.0)
        assert abs(oracle(prob, 0).t - 1.0) < 1e-12

    def test_interval(self):
        prob = respoly.locate(respoly.validate_set([[-1, 1]]), 2.0)
        result = oracle(prob, 1)
        assert abs(result.t - 0.5) < 1e-9
        assert abs(result.poly(2.0) - 1.0) < 1e-9
        assert abs(oracle(prob, 3, 600).t - 1 / 26) < 1e-9

    def test_two_intervals(self):
        prob = respoly.locate(respoly.validate_set([[-2, -1], [1, 2]]), 0.0)
        assert abs(oracle(prob, 2).t - 0.6) < 1e-9

        sol = respoly.solve_residual(prob, 3)
        comparison = respoly.compare(sol, oracle(prob, 3))
        assert comparison.passed
        assert comparison.oracle_degree == 2

    def test_grid_is_a_lower_bound(self):
        prob = respoly.locate(respoly.validate_set([[0, 1], [2, 3], [4, 5]]), 1.5)
        sol = respoly.solve_residual(prob, 4)
        coarse, fine = oracle(prob, 4, 250), oracle(prob, 4, 500)
        assert coarse.t <= fine.t + 1e-12
        assert fine.t <= sol.r + 1e-9
        comparison = respoly.compare(sol, fine)
        assert comparison.lower_ok
        assert comparison.passed

    def test_grid_too_small(self):
        prob = respoly.locate(respoly.validate_set([[-1, 1]]), 2.0)
        with self.assertRaises(respoly.InvalidInputError):
            oracle(prob, 5, points=2)

    @unittest.skipUnless(has_linprog, "scipy.optimize.linprog is not available")
    def test_matches_linprog(self):
        prob = respoly.locate(respoly.validate_set([[-1, 0], [0.5, 2]]), 0.25)
        gp = respoly.GridProblem.from_problem(prob, 3, 200)
        ours = respoly.grid_minimax(gp)

        A = basis_matrix(gp.grid, 3, gp.lower, gp.upper)
        phi = basis_matrix([gp.x0], 3, gp.lower, gp.upper)[0]
        M = np.hstack([A.T, -A.T])
        reference = linprog(np.ones(M.shape[1]), A_eq=M, b_eq=phi, bounds=(0, None), method="highs")
        assert reference.status == 0
        assert abs(ours.t - 1.0 / reference.fun) < 1e-9
