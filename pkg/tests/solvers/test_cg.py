# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

import unittest

import numpy as np

from lrsense.solvers.cg import conjugate_gradient
from lrsense.utils.rng import make_rng


class TestConjugateGradient(unittest.TestCase):
    def setUp(self):
        rng = make_rng(3)
        G = rng.standard_normal((20, 20))
        self.M = G @ G.T + 20 * np.eye(20)
        self.b = rng.standard_normal(20)

    def test_solves_spd_system(self):
        result = conjugate_gradient(lambda v: self.M @ v, self.b, rtol=1e-12, maxiter=200)
        self.assertTrue(result.converged)
        self.assertLessEqual(result.residual_norm, 1e-12)
        np.testing.assert_allclose(result.x, np.linalg.solve(self.M, self.b), rtol=1e-9, atol=1e-12)

    def test_warm_start_at_solution(self):
        x = np.linalg.solve(self.M, self.b)
        result = conjugate_gradient(lambda v: self.M @ v, self.b, x0=x, rtol=1e-8)
        self.assertTrue(result.converged)
        self.assertLessEqual(result.iterations, 1)

    def test_zero_rhs(self):
        result = conjugate_gradient(lambda v: self.M @ v, np.zeros(20))
        self.assertTrue(result.converged)
        self.assertEqual(result.iterations, 0)
        np.testing.assert_array_equal(result.x, np.zeros(20))

    def test_iteration_cap(self):
        result = conjugate_gradient(lambda v: self.M @ v, self.b, rtol=1e-14, maxiter=1)
        self.assertFalse(result.converged)
        self.assertEqual(result.iterations, 1)
        residual = np.linalg.norm(self.M @ result.x - self.b) / np.linalg.norm(self.b)
        self.assertAlmostEqual(result.residual_norm, residual, places=12)

    def test_nonpositive_curvature(self):
        with self.assertLogs("lrsense.solvers.cg", level="WARNING"):
            result = conjugate_gradient(lambda v: -v, self.b)
        self.assertFalse(result.converged)
        self.assertAlmostEqual(result.residual_norm, 1.0, places=12)


if __name__ == "__main__":
    unittest.main()
