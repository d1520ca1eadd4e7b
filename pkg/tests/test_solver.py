#!/usr/bin/env python
import math
import unittest

import numpy as np

import respoly
from respoly.solver import CHEBYSHEV, CONSTANT, DEGENERATE, EXCHANGE, _alternating_subset, alternation_signs


def pair():
    return respoly.locate(respoly.validate_set([[-2, -1], [1, 2]]), 0.0)


def close(a, b, rtol=1e-9):
    return abs(a - b) <= rtol * max(1.0, abs(b))


class Test(unittest.TestCase):
    def test_interval_norms(self):
        prob = respoly.locate(respoly.validate_set([[-1, 1]]), 2.0)
        for n in range(1, 11):
            sol = respoly.solve_residual(prob, n)
            assert close(sol.r, 1.0 / respoly.cheb_classical(n, 2.0))
            assert sol.d_n == n
            assert sol.method == CHEBYSHEV
            assert close(sol.poly(2.0), 1.0)

    def test_degree_zero(self):
        sol = respoly.solve_residual(pair(), 0)
        assert sol.r == 1.0
        assert sol.d_n == 0
        assert sol.method == CONSTANT

    def test_two_intervals(self):
        one = respoly.solve_residual(pair(), 1)
        assert close(one.r, 1.0)
        assert one.d_n == 0
        assert one.method == CONSTANT

        two = respoly.solve_residual(pair(), 2)
        assert close(two.r, 0.6)
        assert two.d_n == 2
        assert two.method == EXCHANGE
        assert close(two.poly(0.0), 1.0)
        # R_2 = 1 - 2x^2/5
        assert np.allclose(np.abs(two.poly(np.array([-2.0, -1.0, 1.0, 2.0]))), 0.6, atol=1e-9)

    def test_degree_drop(self):
        three = respoly.solve_residual(pair(), 3)
        assert close(three.r, 0.6)
        assert three.d_n == 2
        assert three.method == DEGENERATE
        report = respoly.degree_report(three)
        assert report.matched_chebyshev is True
        assert report.deviation <= 1e-9

    def test_chebyshev(self):
        t, norm = respoly.chebyshev(respoly.validate_set([[-1, 1]]), 3)
        assert close(norm, 0.25)
        assert np.allclose(t.to_monomial(), [0.0, -0.75, 0.0, 1.0], atol=1e-10)

        t, norm = respoly.chebyshev(respoly.validate_set([[-2, -1], [1, 2]]), 2)
        assert close(norm, 1.5)
        assert np.allclose(t.to_monomial(), [-2.5, 0.0, 1.0], atol=1e-10)

        with self.assertRaises(respoly.InvalidInputError):
            respoly.chebyshev(respoly.validate_set([[-1, 1]]), 0)

    def test_reference_solve(self):
        ref = respoly.ReferenceSet.split([-2.0, -1.0, 1.0, 2.0], 0.0)
        assert ref.k == 2
        p, h = respoly.reference_solve(ref, 0.0, 3, (-2.0, 2.0))
        assert h > 0
        assert close(p(0.0), 1.0)
        sigma = alternation_signs(ref.points, 0.0, ref.k)
        assert np.allclose(p(np.array(ref.points)), sigma * h, atol=1e-10)

    def test_alternation_signs(self):
        assert list(alternation_signs([1.0, 2.0, 3.0])) == [1.0, -1.0, 1.0]
        sigma = alternation_signs([-2.0, -1.0, 1.0, 2.0], 0.0, 2)
        assert list(sigma) == [-1.0, 1.0, 1.0, -1.0]

    def test_asymmetric_gap(self):
        prob = respoly.locate(respoly.validate_set([[0, 1], [2, 3], [4, 5]]), 1.5)
        for n in (2, 3, 5):
            sol = respoly.solve_residual(prob, n)
            assert sol.converged
            cert = respoly.alternation_certificate(sol)
            assert cert["signs_ok"]
            assert cert["levelled"]
            assert cert["enough_extreme_points"]

    def test_residual_sequence(self):
        prob = respoly.locate(respoly.validate_set([[-1, 0], [0.5, 2]]), 0.25)
        solutions = respoly.residual_sequence(prob, 6)
        norms = [sol.r for sol in solutions]
        assert norms[0] == 1.0
        assert all(b <= a * (1 + 1e-9) for a, b in zip(norms, norms[1:]))

    def test_renormalize(self):
        prob = respoly.locate(respoly.validate_set([[-1, 1]]), 2.0)
        sol = respoly.solve_residual(prob, 4)
        moved = respoly.renormalize(sol, 3.0)
        assert close(moved.r, 1.0 / respoly.cheb_classical(4, 3.0))
        assert moved.x0 == 3.0
        assert close(moved.poly(3.0), 1.0)
        with self.assertRaises(respoly.InvalidInputError):
            respoly.renormalize(respoly.solve_residual(pair(), 2), 5.0)

    def test_dual_residual(self):
        sol = respoly.solve_residual(pair(), 2)
        dual, value = respoly.dual_residual(sol)
        assert close(value, 1.0 / 0.6)
        assert close(dual(0.0), value)
        assert close(float(np.max(np.abs(dual(np.linspace(1, 2, 101))))), 1.0, rtol=1e-8)

    def test_bad_arguments(self):
        with self.assertRaises(respoly.InvalidInputError):
            respoly.solve_residual(pair(), -1)
        with self.assertRaises(respoly.InvalidInputError):
            respoly.solve_residual(pair(), 2, tol=0)

    def test_iteration_cap(self):
        prob = respoly.locate(respoly.validate_set([[-2, -1], [1, 2]]), 0.3)
        with self.assertRaises(respoly.ConvergenceError) as ctx:
            respoly.solve_residual(prob, 2, max_iterations=1)
        assert ctx.exception.best is not None
        assert math.isfinite(ctx.exception.best.norm)

    def test_moderate_degrees_on_two_intervals(self):
        previous = None
        for n in range(14, 23):
            sol = respoly.solve_residual(pair(), n)
            assert sol.converged
            cert = respoly.alternation_certificate(sol)
            assert cert["signs_ok"] and cert["enough_extreme_points"]
            if n % 2:
                assert abs(sol.r / previous.r - 1) < 1e-8
                assert sol.d_n == n - 1
            else:
                assert abs(sol.r * respoly.cheb_classical(n // 2, 5.0 / 3.0) - 1) < 1e-8
            previous = sol

    def test_three_narrow_bands(self):
        prob = respoly.locate(
            respoly.validate_set([[0.00629, 0.09057], [0.30627, 0.42396], [0.48635, 0.91027]]), 0.44095
        )
        solutions = respoly.residual_sequence(prob, 16)
        assert all(sol.converged for sol in solutions)
        assert all(sol.r <= 1.0 for sol in solutions)
        for sol in solutions[1:]:
            assert respoly.alternation_certificate(sol)["enough_extreme_points"]

    def test_affine_equivariance(self):
        realset = respoly.validate_set([[0, 1], [2, 3], [4, 5]])
        for scale, shift in ((2.0, 1.0), (-0.5, 3.0)):
            moved = respoly.locate(respoly.affine(realset, scale, shift), 1.5 * scale + shift)
            for n in (3, 5):
                a = respoly.solve_residual(respoly.locate(realset, 1.5), n)
                b = respoly.solve_residual(moved, n)
                assert abs(b.r / a.r - 1) < 1e-9
                # the hull basis is mapped too; a reflection flips odd coefficients
                signs = np.array([1.0 if scale > 0 else (-1.0) ** i for i in range(n + 1)])
                ca, cb = np.asarray(a.poly.coeffs), np.asarray(b.poly.coeffs)
                assert np.allclose(cb, signs * ca, rtol=0, atol=1e-9 * np.max(np.abs(ca)))

    def test_alternating_subset_needs_the_sign_pattern(self):
        realset = respoly.validate_set([[-2, -1], [1, 2]])
        one = respoly.Polynomial.constant(1.0, -2.0, 2.0)
        found = _alternating_subset(realset, one, 0.0, 2, 1e-6)
        assert found is not None and found[1] == 1.0
        assert _alternating_subset(realset, one.scale(-1.0), 0.0, 2, 1e-6) is None

    def test_to_dict(self):
        doc = respoly.solve_residual(pair(), 2).to_dict()
        for key in ("intervals", "x0", "n", "d_n", "r", "coefficients", "alternation_points", "method"):
            assert key in doc
        assert doc["intervals"] == [[-2.0, -1.0], [1.0, 2.0]]


if __name__ == "__main__":
    unittest.main()
