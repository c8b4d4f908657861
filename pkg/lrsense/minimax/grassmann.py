# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

"""Random points of the Grassmann manifold and greedy packings under tau_q."""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from lrsense.linalg.matcore import INF, as_matrix, check_same_shape, normalize_order, schatten_from_spectrum, schatten_norm
from lrsense.utils.rng import derive_seed, make_rng
from lrsense.utils.status import DomainError, PackingError

logger = logging.getLogger(__name__)


@dataclass
class GrassmannPacking:
    m: int
    k: int
    q: object
    epsilon: float
    projections: list = field(default_factory=list)
    min_pairwise_distance: float = math.inf
    seed: int = 0
    attempts: int = 0

    @property
    def cardinality(self) -> int:
        return len(self.projections)

    @property
    def separation(self) -> float:
        """Required pairwise distance ``epsilon * k^(1/q)``."""
        return separation(self.epsilon, self.k, self.q)


def separation(epsilon: float, k: int, q) -> float:
    q = normalize_order(q)
    return epsilon if q is INF else epsilon * k ** (1.0 / q)


def grassmann_basis(m: int, k: int, seed: int) -> np.ndarray:
    """Orthonormal ``m x k`` basis from the QR factor of a Gaussian matrix."""
    if not 1 <= k <= m:
        raise DomainError("k", k, f"subspace dimension must satisfy 1 <= k <= {m}")
    Q, _ = np.linalg.qr(make_rng(seed).standard_normal((m, k)))
    return Q


def grassmann_sample(m: int, k: int, seed: int) -> np.ndarray:
    """Orthogonal projection onto a random ``k``-dimensional subspace of R^m."""
    Q = grassmann_basis(m, k, seed)
    P = Q @ Q.T
    return 0.5 * (P + P.T)


def tau_q(P, Q, q) -> float:
    """``||P - Q||_q``."""
    P = as_matrix(P, "P")
    Q = as_matrix(Q, "Q")
    check_same_shape(P, Q, "Q")
    return schatten_norm(P - Q, q)


def _distances(kept: np.ndarray, candidate: np.ndarray, q) -> np.ndarray:
    # Differences of projections are symmetric: singular values are |eigenvalues|
    spectra = np.abs(np.linalg.eigvalsh(kept - candidate))
    spectra = -np.sort(-spectra, axis=1)
    return np.array([schatten_from_spectrum(s, q) for s in spectra])


def greedy_packing(
    m: int,
    k: int,
    q,
    epsilon: float,
    max_cardinality: int,
    max_attempts: int,
    seed: int = 0,
    min_cardinality: int = 1,
) -> GrassmannPacking:
    """Keep random projections whose tau_q distance to every kept one is at least ``epsilon k^(1/q)``.

    Candidate ``i`` is ``grassmann_sample(m, k, derive_seed(seed, i))``; candidates
    are accepted in draw order.

    Raises:
        DomainError: If ``k > m - k`` or the limits are not positive.
        PackingError: If fewer than ``min_cardinality`` projections were kept.
    """
    q = normalize_order(q)
    if not 1 <= k <= m - k:
        raise DomainError("k", k, f"need 1 <= k <= m - k = {m - k}")
    if not epsilon > 0:
        raise DomainError("epsilon", epsilon, "separation must be positive")
    if max_cardinality < 1 or max_attempts < 1:
        raise DomainError("(max_cardinality, max_attempts)", (max_cardinality, max_attempts), "must be positive")

    threshold = separation(epsilon, k, q)
    kept = np.empty((max_cardinality, m, m))
    count = 0
    min_distance = math.inf
    attempts = 0
    for i in range(max_attempts):
        if count >= max_cardinality:
            break
        attempts += 1
        candidate = grassmann_sample(m, k, derive_seed(seed, i))
        if count:
            distances = _distances(kept[:count], candidate, q)
            closest = float(np.min(distances))
            if closest < threshold:
                continue
            min_distance = min(min_distance, closest)
        kept[count] = candidate
        count += 1

    logger.info(f"greedy_packing kept {count} of {attempts} candidates (threshold {threshold:.4g})")
    if count < min_cardinality:
        raise PackingError(epsilon, attempts, count, min_cardinality)

    return GrassmannPacking(
        m=m,
        k=k,
        q=q,
        epsilon=epsilon,
        projections=[P for P in kept[:count]],
        min_pairwise_distance=min_distance,
        seed=seed,
        attempts=attempts,
    )


def kl_divergence(A, B, n: int, sigma_xi: float, isotropic: bool = True) -> float:
    """``n ||A - B||_2² / (2 sigma²)``, the KL divergence between two Gaussian trace-regression laws."""
    if not sigma_xi > 0:
        raise DomainError("sigma_xi", sigma_xi, "noise level must be positive")
    if not isotropic:
        raise DomainError("isotropic", isotropic, "only isotropic designs have a closed form")
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    check_same_shape(A, B)
    return n * float(np.sum((A - B) ** 2)) / (2.0 * sigma_xi**2)
