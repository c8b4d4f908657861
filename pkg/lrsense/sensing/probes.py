# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

"""Empirical probes of an ensemble: isometry constants, noise spectral norms and cross-correlations."""

import logging
import math
from dataclasses import dataclass

import numpy as np

from lrsense.linalg.matcore import as_matrix, rank_truncate, spectral_norm
from lrsense.sensing.ensemble import MeasurementEnsemble, NoiseKind, draw_noise, forward, noise_matrix
from lrsense.utils.rng import derive_seed, make_rng
from lrsense.utils.status import DomainError

logger = logging.getLogger(__name__)

ASCENT_STEPS = 50
ASCENT_SCALE = 0.1
# Above this many entries per matrix the Gram matrix is not formed
GRAM_MAX_ENTRIES = 4096


@dataclass(frozen=True)
class RipEstimate:
    """Lower-bound estimate of the isometry constant delta_r (a sup over finitely many probes)."""

    r: int
    delta_hat: float
    n_samples: int
    ascent_steps: int
    seed: int
    per_rank: tuple = ()


def _orthonormal(rng: np.random.Generator, m: int) -> np.ndarray:
    Q, _ = np.linalg.qr(rng.standard_normal((m, m)))
    return Q


def _unit_spectrum(rng: np.random.Generator, size: int, k: int) -> np.ndarray:
    # Prefix of an exponential draw normalized to the simplex, then to unit l2 norm
    weights = rng.standard_exponential(size)[:k]
    weights = weights / np.sum(weights)
    return weights / np.linalg.norm(weights)


def low_rank_probe(m: int, r: int, seed: int) -> np.ndarray:
    """Random unit-Frobenius matrix of rank ``r``.

    Factors are prefix columns of QR-orthonormalized Gaussian matrices, so for a
    fixed seed the column spaces are nested in ``r``.
    """
    if not 1 <= r <= m:
        raise DomainError("r", r, f"probe rank must satisfy 1 <= r <= {m}")
    rng = make_rng(seed)
    U = _orthonormal(rng, m)[:, :r]
    V = _orthonormal(rng, m)[:, :r]
    s = _unit_spectrum(rng, m, r)
    return (U * s) @ V.T


def isometry_deviation(ensemble: MeasurementEnsemble, A) -> float:
    """``| ||X(A)||² / (n ||A||_2²) - 1 |`` for a single matrix."""
    A = as_matrix(A)
    scale = float(np.sum(A * A))
    if scale == 0:
        raise DomainError("A", 0.0, "matrix must be nonzero")
    y = forward(ensemble, A)
    return abs(float(y @ y) / (ensemble.n * scale) - 1.0)


class _Quadratic:
    """Evaluates ``g(A) = ||X(A)||²/n`` and its gradient, through the Gram matrix when small."""

    def __init__(self, ensemble: MeasurementEnsemble):
        self.ensemble = ensemble
        self.m = ensemble.m
        self.use_gram = self.m * self.m <= GRAM_MAX_ENTRIES

    def value_and_gradient(self, A: np.ndarray) -> tuple[float, np.ndarray]:
        vec = A.ravel()
        if self.use_gram:
            Gv = self.ensemble.gram() @ vec
        else:
            design = self.ensemble.design
            Gv = design.T @ (design @ vec) / self.ensemble.n
        return float(vec @ Gv), (2.0 * Gv).reshape(self.m, self.m)


def _refine(quadratic: _Quadratic, A: np.ndarray, k: int, steps: int, step: float) -> float:
    value, grad = quadratic.value_and_gradient(A)
    best = abs(value - 1.0)
    for _ in range(steps):
        direction = math.copysign(1.0, value - 1.0) * grad
        A, _ = rank_truncate(A + step * direction, k)
        norm = np.linalg.norm(A)
        if norm == 0:
            break
        A = A / norm
        value, grad = quadratic.value_and_gradient(A)
        best = max(best, abs(value - 1.0))
    return best


def rip_probe(
    ensemble: MeasurementEnsemble, r: int, n_samples: int, ascent_steps: int = ASCENT_STEPS, seed: int = 0
) -> RipEstimate:
    """Estimate delta_r from below by random low-rank probes plus projected ascent.

    The rank-``r`` estimate is the maximum of the rank-``k`` results for
    ``k = 1..r``, all drawn from the same per-sample streams, so the estimate
    never decreases with ``r``.
    """
    m = ensemble.m
    if not isinstance(r, (int, np.integer)) or not 1 <= r <= m:
        raise DomainError("r", r, f"RIP rank must satisfy 1 <= r <= {m}")
    if n_samples < 1:
        raise DomainError("n_samples", n_samples, "need at least one probe")
    if ascent_steps < 0:
        raise DomainError("ascent_steps", ascent_steps, "must be nonnegative")

    quadratic = _Quadratic(ensemble)
    step = ASCENT_SCALE / math.sqrt(ensemble.n)
    per_rank = []
    for k in range(1, r + 1):
        best = 0.0
        for i in range(n_samples):
            probe = low_rank_probe(m, k, derive_seed(seed, i))
            best = max(best, _refine(quadratic, probe, k, ascent_steps, step))
        per_rank.append(best)
        logger.debug(f"rip_probe rank {k}: delta_hat={best:.4g}")

    return RipEstimate(
        r=r,
        delta_hat=max(per_rank),
        n_samples=n_samples,
        ascent_steps=ascent_steps,
        seed=seed,
        per_rank=tuple(per_rank),
    )


def noise_norm_probe(
    ensemble: MeasurementEnsemble, sigma_xi: float, trials: int, seed: int = 0, noise_kind=NoiseKind.GAUSSIAN
) -> np.ndarray:
    """``||(1/n) sum_j xi_j X_j||_inf`` for ``trials`` fresh noise draws.

    Trial ``t`` draws its noise from ``derive_seed(seed, t)``.
    """
    if trials < 1:
        raise DomainError("trials", trials, "need at least one trial")
    norms = np.empty(trials)
    for t in range(trials):
        noise = draw_noise(ensemble.n, sigma_xi, noise_kind, derive_seed(seed, t))
        norms[t] = spectral_norm(noise_matrix(ensemble, noise))
    return norms


def cross_correlation_probe(
    ensemble: MeasurementEnsemble, r: int, r_prime: int, n_samples: int, seed: int = 0
) -> float:
    """Max of ``(1/n)|<X(A), X(B)>|`` over orthogonal unit pairs of ranks ``r`` and ``r_prime``.

    Each pair uses disjoint column blocks of the same orthonormal bases, so
    ``<A, B> = 0`` exactly.
    """
    m = ensemble.m
    if r < 1 or r_prime < 1 or r + r_prime > m:
        raise DomainError("(r, r_prime)", (r, r_prime), f"need both >= 1 and r + r_prime <= {m}")
    if n_samples < 1:
        raise DomainError("n_samples", n_samples, "need at least one probe")

    best = 0.0
    for i in range(n_samples):
        rng = make_rng(derive_seed(seed, i))
        U = _orthonormal(rng, m)
        V = _orthonormal(rng, m)
        A = (U[:, :r] * _unit_spectrum(rng, r, r)) @ V[:, :r].T
        B = (U[:, r : r + r_prime] * _unit_spectrum(rng, r_prime, r_prime)) @ V[:, r : r + r_prime].T
        value = abs(float(forward(ensemble, A) @ forward(ensemble, B))) / ensemble.n
        best = max(best, value)
    return best
