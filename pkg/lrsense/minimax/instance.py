# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

"""Scaled projection families used for minimax lower bounds."""

import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from lrsense.minimax.grassmann import GrassmannPacking, greedy_packing, kl_divergence
from lrsense.sensing.container import save_matrices
from lrsense.utils.status import DomainError

DEFAULT_EPSILON = 0.5
DEFAULT_MAX_CARDINALITY = 64
DEFAULT_MAX_ATTEMPTS = 2000


@dataclass
class MinimaxInstance:
    packing: GrassmannPacking
    kappa: float
    matrices: list
    n: int
    sigma_xi: float
    c_prime: float
    max_pairwise_kl: float
    log_cardinality: float

    @property
    def kl_condition_met(self) -> bool:
        return self.max_pairwise_kl <= self.log_cardinality

    @property
    def cardinality(self) -> int:
        return len(self.matrices)

    def to_dict(self):
        return {
            "m": self.packing.m,
            "r": self.packing.k,
            "n": self.n,
            "sigma_xi": self.sigma_xi,
            "c_prime": self.c_prime,
            "kappa": self.kappa,
            "cardinality": self.cardinality,
            "max_pairwise_kl": self.max_pairwise_kl,
            "log_cardinality": self.log_cardinality,
            "kl_condition_met": self.kl_condition_met,
        }

    def to_json(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=4)

    def save(self, stem):
        """Write ``<stem>.bin`` (the matrices) and ``<stem>.json`` (the sidecar)."""
        stem = Path(stem)
        save_matrices(stem.with_suffix(".bin"), np.stack(self.matrices), seed=self.packing.seed)
        self.to_json(stem.with_suffix(".json"))


def build_minimax_instance(
    m: int,
    r: int,
    n: int,
    sigma_xi: float,
    c_prime: float,
    q=2,
    seed: int = 0,
    epsilon: float = DEFAULT_EPSILON,
    max_cardinality: int = DEFAULT_MAX_CARDINALITY,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> MinimaxInstance:
    """Pack rank-``r`` projections, scale them by ``kappa = c' sigma sqrt(m/n)`` and compare KL to log-cardinality."""
    if not 1 <= r or 2 * r > m:
        raise DomainError("r", r, f"need 1 <= r and 2r <= m = {m}")
    if not c_prime > 0:
        raise DomainError("c_prime", c_prime, "must be positive")
    if not sigma_xi > 0:
        raise DomainError("sigma_xi", sigma_xi, "noise level must be positive")
    if n < 1:
        raise DomainError("n", n, "number of measurements must be positive")

    packing = greedy_packing(m, r, q, epsilon, max_cardinality, max_attempts, seed=seed, min_cardinality=2)
    kappa = c_prime * sigma_xi * math.sqrt(m / n)
    matrices = [kappa * P for P in packing.projections]
    max_kl = max(
        kl_divergence(A, B, n, sigma_xi) for A, B in itertools.combinations(matrices, 2)
    )
    return MinimaxInstance(
        packing=packing,
        kappa=kappa,
        matrices=matrices,
        n=n,
        sigma_xi=sigma_xi,
        c_prime=c_prime,
        max_pairwise_kl=max_kl,
        log_cardinality=math.log(len(matrices)),
    )
