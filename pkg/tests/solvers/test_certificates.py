# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

import math
import unittest

import numpy as np

from lrsense.linalg.matcore import spectral_norm
from lrsense.orchestrator.experiment import ground_truth
from lrsense.sensing.ensemble import EnsembleSpec, adjoint, generate_dataset, observed_dataset, sample_ensemble
from lrsense.sensing.probes import noise_norm_probe
from lrsense.solvers.admm import AdmmConfig, admm_lasso
from lrsense.solvers.certificates import dantzig_certificate, lasso_kkt_certificate
from lrsense.utils.rng import derive_seed
from lrsense.utils.status import DimensionError, DomainError


class TestDantzigCertificate(unittest.TestCase):
    def setUp(self):
        self.ensemble = sample_ensemble(EnsembleSpec(kind="gaussian", m=5, n=60, seed=3))

    def test_exact_fit_is_feasible(self):
        A0 = ground_truth(5, 2, seed=4)
        dataset = generate_dataset(A0, self.ensemble, 0.0)
        certificate = dantzig_certificate(dataset, A0, 1e-6)
        self.assertEqual(certificate.residual_norm, 0.0)
        self.assertTrue(certificate.feasible)
        self.assertTrue(certificate.cone_ok)
        self.assertEqual(certificate.cone_ratio, 0.0)
        self.assertTrue(certificate.gram_ok)

    def test_zero_estimate_of_pure_noise(self):
        sigma = 0.3
        dataset = generate_dataset(np.zeros((5, 5)), self.ensemble, sigma, noise_seed=derive_seed(17, 0))
        certificate = dantzig_certificate(dataset, np.zeros((5, 5)), 1.0)
        expected = noise_norm_probe(self.ensemble, sigma, 1, seed=17)[0] * self.ensemble.n
        self.assertAlmostEqual(certificate.residual_norm, expected, delta=1e-10 * expected)
        self.assertAlmostEqual(certificate.residual_norm, spectral_norm(dataset.noise_sum), delta=1e-10 * expected)
        self.assertEqual(certificate.feasible, certificate.residual_norm <= 1.0)
        self.assertTrue(certificate.cone_ok)

    def test_without_ground_truth(self):
        dataset = observed_dataset(self.ensemble, np.ones(60))
        certificate = dantzig_certificate(dataset, np.zeros((5, 5)), 1e9)
        self.assertTrue(certificate.feasible)
        self.assertIsNone(certificate.cone_ok)
        self.assertIsNone(certificate.gram_ok)

    def test_contract(self):
        dataset = observed_dataset(self.ensemble, np.ones(60))
        with self.assertRaises(DomainError):
            dantzig_certificate(dataset, np.zeros((5, 5)), 0.0)
        with self.assertRaises(DimensionError):
            dantzig_certificate(dataset, np.zeros((4, 4)), 1.0)


class TestKktCertificate(unittest.TestCase):
    def setUp(self):
        self.ensemble = sample_ensemble(EnsembleSpec(kind="gaussian", m=4, n=40, seed=6))
        self.dataset = generate_dataset(np.zeros((4, 4)), self.ensemble, 1.0, noise_seed=2)

    def test_zero_is_optimal_for_large_lambda(self):
        lam = 3.0 * spectral_norm(adjoint(self.ensemble, self.dataset.responses))
        certificate = lasso_kkt_certificate(self.dataset, np.zeros((4, 4)), lam)
        self.assertEqual(certificate.support_rank, 0)
        self.assertAlmostEqual(certificate.dual_norm, 2.0 / 3.0, places=10)
        self.assertTrue(certificate.holds())

    def test_zero_is_not_optimal_for_small_lambda(self):
        lam = 0.5 * spectral_norm(adjoint(self.ensemble, self.dataset.responses))
        certificate = lasso_kkt_certificate(self.dataset, np.zeros((4, 4)), lam)
        self.assertAlmostEqual(certificate.dual_norm, 4.0, places=10)
        self.assertFalse(certificate.holds())

    def test_support_rank(self):
        A = np.diag([2.0, 1.0, 0.0, 0.0])
        certificate = lasso_kkt_certificate(self.dataset, A, 1.0)
        self.assertEqual(certificate.support_rank, 2)

    def test_full_support_has_no_off_block(self):
        A = np.diag([4.0, 3.0, 2.0, 1.0])
        certificate = lasso_kkt_certificate(self.dataset, A, 1.0)
        self.assertEqual(certificate.support_rank, 4)
        self.assertEqual(certificate.off_support_norm, 0.0)


class TestConvergedLasso(unittest.TestCase):
    def test_solution_passes_gram_check(self):
        for seed in range(3):
            A0 = ground_truth(6, 1, derive_seed(seed, 1))
            ensemble = sample_ensemble(EnsembleSpec(kind="gaussian", m=6, n=120, seed=derive_seed(seed, 2)))
            dataset = generate_dataset(A0, ensemble, 0.1, noise_seed=derive_seed(seed, 3))
            lam = max(7 * 0.1 * math.sqrt(6 * 120), 2.0 * spectral_norm(dataset.noise_sum))
            result = admm_lasso(dataset, AdmmConfig(lam=lam, max_iterations=5000), init_seed=seed)
            self.assertTrue(result.converged)

            certificate = dantzig_certificate(dataset, result.estimate, lam, r=1)
            self.assertTrue(certificate.gram_ok)
            self.assertLessEqual(certificate.gram_residual, 1.5 * lam)
            self.assertLessEqual(lasso_kkt_certificate(dataset, result.estimate, lam).dual_norm, 1.01)


if __name__ == "__main__":
    unittest.main()
