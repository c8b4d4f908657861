# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

"""Restricted strong convexity probe over the cone C(r, c0)."""

import logging
import math
from dataclasses import dataclass

import numpy as np

from lrsense.linalg.matcore import as_matrix, rank_truncate
from lrsense.sensing.ensemble import MeasurementEnsemble, forward
from lrsense.utils.rng import derive_seed, make_rng
from lrsense.utils.status import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RscEstimate:
    """Upper-bound estimate of kappa(r, c0), the minimum over sampled cone members."""

    r: int
    c0: float
    kappa_hat: float
    n_samples: int
    seed: int
    tail_suppressed: bool
    effective_rank: int


def cone_probe_matrix(m: int, r: int, c0: float, seed: int) -> tuple[np.ndarray, bool]:
    """Random matrix on the boundary of C(r, c0).

    A random rank-``r`` head plus a tail on the orthogonal complement whose
    nuclear norm is ``c0`` times the head's. When ``r >= m`` there is no room
    for a tail and it is dropped.

    Returns:
        tuple: ``(Delta, tail_suppressed)``.
    """
    if r < 1:
        raise DomainError("r", r, "cone rank must be at least 1")
    if not c0 > 0:
        raise DomainError("c0", c0, "cone constant must be positive")
    rng = make_rng(seed)
    U, _ = np.linalg.qr(rng.standard_normal((m, m)))
    V, _ = np.linalg.qr(rng.standard_normal((m, m)))
    k = min(r, m)
    spectrum = np.zeros(m)
    spectrum[:k] = rng.standard_exponential(k)
    tail_suppressed = k >= m
    if not tail_suppressed:
        tail = rng.standard_exponential(m - k)
        spectrum[k:] = tail * (c0 * np.sum(spectrum[:k]) / np.sum(tail))
    return (U * spectrum) @ V.T, tail_suppressed


def restricted_eigen_ratio(ensemble: MeasurementEnsemble, Delta, r: int) -> float:
    """``||X(Delta)|| / (sqrt(n) ||Delta_max(r)||_2)``."""
    Delta = as_matrix(Delta, "Delta")
    head, _ = rank_truncate(Delta, min(r, Delta.shape[0]))
    head_norm = np.linalg.norm(head)
    if head_norm == 0:
        raise DomainError("Delta", 0.0, "head of the cone member vanishes")
    return float(np.linalg.norm(forward(ensemble, Delta)) / (math.sqrt(ensemble.n) * head_norm))


def rsc_probe(ensemble: MeasurementEnsemble, r: int, c0: float = 3.0, n_samples: int = 100, seed: int = 0) -> RscEstimate:
    """Minimum restricted eigen ratio over ``n_samples`` cone-boundary matrices.

    Sample ``i`` is drawn from ``derive_seed(seed, i)``.
    """
    if n_samples < 1:
        raise DomainError("n_samples", n_samples, "need at least one sample")
    m = ensemble.m
    kappa_hat = math.inf
    tail_suppressed = False
    for i in range(n_samples):
        Delta, suppressed = cone_probe_matrix(m, r, c0, derive_seed(seed, i))
        tail_suppressed = tail_suppressed or suppressed
        kappa_hat = min(kappa_hat, restricted_eigen_ratio(ensemble, Delta, r))
    if tail_suppressed:
        logger.warning(f"rsc_probe: r={r} >= m={m}, tail set to zero")
    return RscEstimate(
        r=r,
        c0=c0,
        kappa_hat=kappa_hat,
        n_samples=n_samples,
        seed=seed,
        tail_suppressed=tail_suppressed,
        effective_rank=min(r, m),
    )
