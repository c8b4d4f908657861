# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

import unittest

import numpy as np

from lrsense.sensing.ensemble import EnsembleSpec, MeasurementEnsemble, forward, sample_ensemble
from lrsense.sensing.probes import (
    cross_correlation_probe,
    isometry_deviation,
    low_rank_probe,
    noise_norm_probe,
    rip_probe,
)
from lrsense.linalg.matcore import numerical_rank
from lrsense.utils.rng import derive_seed, make_rng
from lrsense.utils.status import DomainError


class TestLowRankProbe(unittest.TestCase):
    def test_unit_norm_and_rank(self):
        A = low_rank_probe(8, 3, seed=4)
        self.assertAlmostEqual(float(np.linalg.norm(A)), 1.0, places=12)
        self.assertEqual(numerical_rank(A), 3)

    def test_rank_out_of_range(self):
        with self.assertRaises(DomainError):
            low_rank_probe(4, 5, seed=0)


class TestRipProbe(unittest.TestCase):
    def test_single_probe_by_hand(self):
        ensemble = sample_ensemble(EnsembleSpec(kind="gaussian", m=3, n=3, seed=2))
        estimate = rip_probe(ensemble, 1, n_samples=1, ascent_steps=0, seed=5)
        A = low_rank_probe(3, 1, derive_seed(5, 0))
        y = forward(ensemble, A)
        expected = abs(float(np.sum(y**2)) / 3 - 1.0)
        self.assertAlmostEqual(estimate.delta_hat, expected, places=12)
        self.assertAlmostEqual(isometry_deviation(ensemble, A), expected, places=12)

    def test_monotone_in_rank(self):
        ensemble = sample_ensemble(EnsembleSpec(kind="gaussian", m=5, n=60, seed=3))
        low = rip_probe(ensemble, 1, n_samples=4, ascent_steps=3, seed=1)
        high = rip_probe(ensemble, 2, n_samples=4, ascent_steps=3, seed=1)
        self.assertEqual(low.per_rank[0], high.per_rank[0])
        self.assertGreaterEqual(high.delta_hat, low.delta_hat)
        self.assertEqual(high.delta_hat, max(high.per_rank))

    def test_ascent_does_not_lower_estimate(self):
        ensemble = sample_ensemble(EnsembleSpec(kind="gaussian", m=4, n=30, seed=6))
        plain = rip_probe(ensemble, 1, n_samples=3, ascent_steps=0, seed=2)
        refined = rip_probe(ensemble, 1, n_samples=3, ascent_steps=10, seed=2)
        self.assertGreaterEqual(refined.delta_hat, plain.delta_hat)

    def test_well_conditioned_design(self):
        ensemble = sample_ensemble(EnsembleSpec(kind="gaussian", m=10, n=4000, seed=7))
        estimate = rip_probe(ensemble, 1, n_samples=20, ascent_steps=10, seed=8)
        self.assertLessEqual(estimate.delta_hat, 0.3)

    def test_contract(self):
        ensemble = sample_ensemble(EnsembleSpec(kind="gaussian", m=3, n=5, seed=0))
        with self.assertRaises(DomainError):
            rip_probe(ensemble, 1, n_samples=0)
        with self.assertRaises(DomainError):
            rip_probe(ensemble, 4, n_samples=1)
        with self.assertRaises(DomainError):
            rip_probe(ensemble, 1, n_samples=1, ascent_steps=-1)


class TestNoiseNormProbe(unittest.TestCase):
    def test_zero_sigma(self):
        ensemble = sample_ensemble(EnsembleSpec(kind="gaussian", m=4, n=10, seed=1))
        np.testing.assert_array_equal(noise_norm_probe(ensemble, 0.0, 5, seed=3), np.zeros(5))

    def test_identity_design(self):
        ensemble = MeasurementEnsemble.from_matrices([np.eye(3)])
        norms = noise_norm_probe(ensemble, 0.7, 2, seed=11)
        for t in range(2):
            xi = 0.7 * make_rng(derive_seed(11, t)).standard_normal(1)[0]
            self.assertAlmostEqual(norms[t], abs(xi), places=12)

    def test_scaling_with_side(self):
        sigma, n = 0.01, 2000
        ratios = []
        for m in (20, 40):
            ensemble = sample_ensemble(EnsembleSpec(kind="gaussian", m=m, n=n, seed=m))
            norms = noise_norm_probe(ensemble, sigma, 20, seed=1)
            ratios.append(float(np.median(norms)) / (sigma * np.sqrt(m / n)))
        self.assertLess(max(ratios) / min(ratios), 2.0)

    def test_rejects_no_trials(self):
        ensemble = sample_ensemble(EnsembleSpec(kind="gaussian", m=2, n=2, seed=1))
        with self.assertRaises(DomainError):
            noise_norm_probe(ensemble, 1.0, 0)


class TestCrossCorrelationProbe(unittest.TestCase):
    def test_small_for_large_n(self):
        ensemble = sample_ensemble(EnsembleSpec(kind="gaussian", m=6, n=3000, seed=4))
        self.assertLess(cross_correlation_probe(ensemble, 2, 2, n_samples=10, seed=1), 0.2)

    def test_rank_budget(self):
        ensemble = sample_ensemble(EnsembleSpec(kind="gaussian", m=4, n=10, seed=4))
        with self.assertRaises(DomainError):
            cross_correlation_probe(ensemble, 3, 2, n_samples=1)
        with self.assertRaises(DomainError):
            cross_correlation_probe(ensemble, 0, 1, n_samples=1)


if __name__ == "__main__":
    unittest.main()
