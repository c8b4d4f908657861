# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

import itertools
import json
import math
import tempfile
import unittest
from pathlib import Path

import numpy as np

from lrsense.minimax.grassmann import tau_q
from lrsense.minimax.instance import build_minimax_instance
from lrsense.sensing.container import load_matrices
from lrsense.utils.status import DomainError


class TestMinimaxInstance(unittest.TestCase):
    def test_small_scale_meets_kl_condition(self):
        instance = build_minimax_instance(10, 2, 1000, 1.0, 0.05, seed=3)
        self.assertGreaterEqual(instance.cardinality, 2)
        self.assertAlmostEqual(instance.kappa, 0.05 * math.sqrt(10 / 1000))
        self.assertTrue(instance.kl_condition_met)
        tau_max = max(tau_q(P, Q, 2) for P, Q in itertools.combinations(instance.packing.projections, 2))
        expected = 0.05**2 * 10 * tau_max**2 / 2
        self.assertAlmostEqual(instance.max_pairwise_kl, expected, delta=1e-9 * expected)
        self.assertAlmostEqual(instance.log_cardinality, math.log(instance.cardinality))

    def test_large_scale_breaks_kl_condition(self):
        instance = build_minimax_instance(10, 2, 1000, 1.0, 100.0, seed=3)
        self.assertFalse(instance.kl_condition_met)

    def test_matrices_are_scaled_projections(self):
        instance = build_minimax_instance(6, 1, 50, 0.5, 1.0, seed=1)
        for A, P in zip(instance.matrices, instance.packing.projections):
            np.testing.assert_allclose(A, instance.kappa * P)
            self.assertEqual(np.linalg.matrix_rank(P), 1)

    def test_distances_scale_by_kappa(self):
        instance = build_minimax_instance(10, 2, 1000, 1.0, 0.05, seed=3)
        pairs = itertools.combinations(zip(instance.matrices, instance.packing.projections), 2)
        for (A, P), (B, Q) in pairs:
            for q in (1, 2, np.inf):
                expected = tau_q(P, Q, q)
                self.assertAlmostEqual(tau_q(A, B, q) / instance.kappa, expected, delta=1e-10 * max(expected, 1.0))

    def test_save(self):
        instance = build_minimax_instance(6, 1, 50, 0.5, 1.0, seed=1)
        with tempfile.TemporaryDirectory() as tmp:
            stem = Path(tmp) / "family"
            instance.save(stem)
            matrices = load_matrices(stem.with_suffix(".bin"))
            self.assertEqual(matrices.shape, (instance.cardinality, 6, 6))
            np.testing.assert_array_equal(matrices[0], instance.matrices[0])
            with open(stem.with_suffix(".json")) as f:
                sidecar = json.load(f)
            self.assertEqual(sidecar["cardinality"], instance.cardinality)
            self.assertEqual(sidecar["kl_condition_met"], instance.kl_condition_met)

    def test_domain(self):
        with self.assertRaises(DomainError):
            build_minimax_instance(4, 3, 10, 1.0, 1.0)
        with self.assertRaises(DomainError):
            build_minimax_instance(4, 1, 10, 0.0, 1.0)
        with self.assertRaises(DomainError):
            build_minimax_instance(4, 1, 10, 1.0, 0.0)


if __name__ == "__main__":
    unittest.main()
