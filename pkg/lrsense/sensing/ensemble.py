# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

"""Measurement ensembles, the sampling operator and trace-regression datasets."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from lrsense.linalg.matcore import as_matrix
from lrsense.utils.rng import make_rng
from lrsense.utils.status import DimensionError, DomainError


class EnsembleKind(str, Enum):
    GAUSSIAN = "gaussian"
    RADEMACHER = "rademacher"


class NoiseKind(str, Enum):
    GAUSSIAN = "gaussian"
    RADEMACHER_SCALED = "rademacher_scaled"


@dataclass(frozen=True)
class EnsembleSpec:
    kind: EnsembleKind
    m: int
    n: int
    seed: int

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", EnsembleKind(self.kind))
        except ValueError:
            raise DomainError("kind", self.kind, "must be 'gaussian' or 'rademacher'")


@dataclass(frozen=True, eq=False)
class MeasurementEnsemble:
    """``n`` measurement matrices stored as one read-only ``(n, m, m)`` array."""

    spec: EnsembleSpec
    matrices: np.ndarray
    isotropic: bool = True
    _gram: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        matrices = np.ascontiguousarray(self.matrices, dtype=np.float64)
        if matrices.ndim != 3 or matrices.shape[1] != matrices.shape[2]:
            raise DimensionError("matrices", "(n, m, m) array", matrices.shape)
        matrices.setflags(write=False)
        object.__setattr__(self, "matrices", matrices)

    @classmethod
    def from_matrices(cls, matrices, kind=EnsembleKind.GAUSSIAN, seed=0, isotropic=True):
        """Wrap explicit matrices (including an empty list) as an ensemble."""
        matrices = np.array(matrices, dtype=np.float64)
        if matrices.ndim != 3:
            raise DimensionError("matrices", "(n, m, m) array", matrices.shape)
        spec = EnsembleSpec(kind=kind, m=matrices.shape[1], n=matrices.shape[0], seed=seed)
        return cls(spec=spec, matrices=matrices, isotropic=isotropic)

    @property
    def m(self) -> int:
        return self.matrices.shape[1]

    @property
    def n(self) -> int:
        return self.matrices.shape[0]

    @property
    def kind(self) -> EnsembleKind:
        return self.spec.kind

    @property
    def design(self) -> np.ndarray:
        """Row j is X_j flattened row-major, so ``design @ A.ravel()`` is the forward map."""
        return self.matrices.reshape(self.n, self.m * self.m)

    def gram(self) -> np.ndarray:
        """The ``m² x m²`` matrix of ``(1/n) X* X``, computed once."""
        if "gram" not in self._gram:
            design = self.design
            self._gram["gram"] = design.T @ design / max(self.n, 1)
        return self._gram["gram"]


@dataclass(frozen=True, eq=False)
class TraceRegressionDataset:
    ensemble: MeasurementEnsemble
    A0: Optional[np.ndarray]
    sigma_xi: float
    noise: Optional[np.ndarray]
    responses: np.ndarray
    noise_kind: NoiseKind = NoiseKind.GAUSSIAN
    noise_seed: int = 0

    @property
    def m(self) -> int:
        return self.ensemble.m

    @property
    def n(self) -> int:
        return self.ensemble.n

    @property
    def has_ground_truth(self) -> bool:
        return self.A0 is not None

    @property
    def noise_sum(self) -> np.ndarray:
        """W = sum_j xi_j X_j."""
        if self.noise is None:
            raise DomainError("noise", None, "dataset carries no noise realization")
        return adjoint(self.ensemble, self.noise)


def sample_ensemble(spec: EnsembleSpec) -> MeasurementEnsemble:
    """Draw i.i.d. standard normal or equiprobable ±1 entries from the spec's seed."""
    if spec.m < 1:
        raise DomainError("m", spec.m, "matrix side must be positive")
    if spec.n < 1:
        raise DomainError("n", spec.n, "number of measurements must be positive")
    rng = make_rng(spec.seed)
    shape = (spec.n, spec.m, spec.m)
    if spec.kind is EnsembleKind.GAUSSIAN:
        matrices = rng.standard_normal(shape)
    else:
        matrices = 2.0 * rng.integers(0, 2, size=shape).astype(np.float64) - 1.0
    return MeasurementEnsemble(spec=spec, matrices=matrices)


def _check_operand(ensemble: MeasurementEnsemble, A) -> np.ndarray:
    A = as_matrix(A)
    if A.shape != (ensemble.m, ensemble.m):
        raise DimensionError("A", (ensemble.m, ensemble.m), A.shape)
    return A


def forward(ensemble: MeasurementEnsemble, A) -> np.ndarray:
    """Apply the sampling operator: component j is ``trace(X_jᵀ A)``."""
    A = _check_operand(ensemble, A)
    return ensemble.design @ A.ravel()


def adjoint(ensemble: MeasurementEnsemble, u) -> np.ndarray:
    """Return ``sum_j u_j X_j``."""
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (ensemble.n,):
        raise DimensionError("u", (ensemble.n,), u.shape)
    return (ensemble.design.T @ u).reshape(ensemble.m, ensemble.m)


def draw_noise(n: int, sigma_xi: float, noise_kind, seed: int) -> np.ndarray:
    if not sigma_xi >= 0:
        raise DomainError("sigma_xi", sigma_xi, "noise level must be nonnegative")
    noise_kind = NoiseKind(noise_kind)
    rng = make_rng(seed)
    if noise_kind is NoiseKind.GAUSSIAN:
        base = rng.standard_normal(n)
    else:
        base = 2.0 * rng.integers(0, 2, size=n).astype(np.float64) - 1.0
    if sigma_xi == 0:
        return np.zeros(n)
    return sigma_xi * base


def generate_dataset(
    A0, ensemble: MeasurementEnsemble, sigma_xi: float, noise_kind=NoiseKind.GAUSSIAN, noise_seed: int = 0
) -> TraceRegressionDataset:
    """Synthesize ``Y_j = <A0, X_j> + xi_j`` with i.i.d. noise of standard deviation ``sigma_xi``."""
    A0 = _check_operand(ensemble, A0)
    noise = draw_noise(ensemble.n, sigma_xi, noise_kind, noise_seed)
    responses = forward(ensemble, A0) + noise
    return TraceRegressionDataset(
        ensemble=ensemble,
        A0=A0.copy(),
        sigma_xi=float(sigma_xi),
        noise=noise,
        responses=responses,
        noise_kind=NoiseKind(noise_kind),
        noise_seed=noise_seed,
    )


def observed_dataset(ensemble: MeasurementEnsemble, responses, sigma_xi: float = 0.0) -> TraceRegressionDataset:
    """A dataset known only through its responses (no ground truth, no noise)."""
    responses = np.asarray(responses, dtype=np.float64)
    if responses.shape != (ensemble.n,):
        raise DimensionError("responses", (ensemble.n,), responses.shape)
    return TraceRegressionDataset(
        ensemble=ensemble, A0=None, sigma_xi=float(sigma_xi), noise=None, responses=responses
    )


def noise_matrix(ensemble: MeasurementEnsemble, noise) -> np.ndarray:
    """``(1/n) sum_j xi_j X_j``."""
    return adjoint(ensemble, noise) / ensemble.n
