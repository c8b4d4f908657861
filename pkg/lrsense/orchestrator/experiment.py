# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

"""Experiment configuration, trial records and the per-trial pipeline."""

import json
import logging
import time
from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from lrsense.config import get_theory_defaults
from lrsense.linalg.matcore import spectral_norm
from lrsense.paths import config as lab_config
from lrsense.sensing.ensemble import EnsembleKind, EnsembleSpec, NoiseKind, generate_dataset, sample_ensemble
from lrsense.solvers.admm import AdmmConfig, AdmmSettings, admm_lasso
from lrsense.solvers.certificates import dantzig_certificate
from lrsense.solvers.lambdas import LambdaVariant, lambda_floor, lambda_rule
from lrsense.theory.bounds import SCHATTEN_GRID, bound_check, error_report, order_label
from lrsense.theory.constants import theory_constants
from lrsense.utils.rng import derive_seed, make_rng
from lrsense.utils.status import ConfigError, DomainError

logger = logging.getLogger(__name__)

# Sub-stream keys under a trial seed
GROUND_TRUTH_STREAM = 1
ENSEMBLE_STREAM = 2
NOISE_STREAM = 3
INIT_STREAM = 4

BASE_COLUMNS = [
    "m",
    "r",
    "n",
    "trial",
    "seed",
    "lambda",
    "rho",
    "iterations",
    "converged",
    "spectral_error",
    "frobenius_error",
    "nuclear_error",
    "ratio_spectral",
    "lambda_ge_2W",
    "cone_ok",
    "wall_time_ms",
]
EXTRA_COLUMNS = ["spectral_ok", "nuclear_ok", "kyfan_ok", "schatten_ok", "dantzig_feasible", "cone_ratio"]


class NRule(str, Enum):
    FIVE_M_R = "five_m_r"
    EXPLICIT = "explicit"


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = "experiment"
    m_values: list[int] = Field(min_length=1)
    r_values: list[int] = Field(min_length=1)
    n_rule: NRule = NRule.FIVE_M_R
    n_values: Optional[list[int]] = None
    trials: int = Field(default=3, ge=1)
    sigma_xi: float = Field(default=0.01, ge=0)
    ensemble_kind: EnsembleKind = EnsembleKind.GAUSSIAN
    lambda_variant: LambdaVariant = LambdaVariant.EXPERIMENT
    C2: float = Field(default=1.0, gt=0)
    admm: AdmmSettings = Field(default_factory=AdmmSettings)
    master_seed: int = Field(default=0, ge=0)
    output_dir: Optional[Path] = None
    workers: int = Field(default=1, ge=1)
    alpha: float = Field(default=2.0, gt=1)
    c0: float = Field(default=3.0, gt=0)
    cone_beta: float = Field(default=3.01, gt=0)
    record_wall_time: bool = True
    cache_ensembles: bool = False

    @model_validator(mode="before")
    @classmethod
    def _fill_theory_defaults(cls, data):
        if isinstance(data, dict):
            data = {**get_theory_defaults(), **data}
        return data

    @model_validator(mode="after")
    def _check_grid(self):
        if min(self.m_values) < 2:
            raise ValueError(f"all m must be >= 2, got {self.m_values}")
        if min(self.r_values) < 1 or max(self.r_values) > min(self.m_values):
            raise ValueError(f"r_values {self.r_values} must lie in [1, {min(self.m_values)}]")
        if self.n_rule is NRule.EXPLICIT:
            if self.n_values is None or len(self.n_values) != len(self.r_values):
                raise ValueError("explicit n_rule needs n_values aligned with r_values")
            if min(self.n_values) < 1:
                raise ValueError(f"n_values must be positive, got {self.n_values}")
        elif self.n_values is not None:
            raise ValueError("n_values is only allowed with n_rule='explicit'")
        return self

    def n_for(self, m: int, r: int) -> int:
        if self.n_rule is NRule.FIVE_M_R:
            return 5 * m * r
        return self.n_values[self.r_values.index(r)]

    def cells(self) -> list[tuple[int, int, int]]:
        """All ``(m, r, trial)`` cells in output order."""
        return [(m, r, t) for m in self.m_values for r in self.r_values for t in range(self.trials)]

    @property
    def kyfan_max(self) -> int:
        """Widest Ky-Fan range over the grid; narrower rows leave the extra cells blank."""
        return min(max(self.m_values), 2 * max(self.r_values) + 2)

    def csv_columns(self) -> list[str]:
        kyfan = [f"kyfan_k{k}" for k in range(1, self.kyfan_max + 1)]
        schatten = [f"schatten_q{order_label(q)}" for q in SCHATTEN_GRID]
        return BASE_COLUMNS + kyfan + schatten + EXTRA_COLUMNS


def load_experiment_config(path) -> ExperimentConfig:
    """Read and validate a JSON experiment document.

    Raises:
        ConfigError: If the file is missing, is not JSON or fails validation.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file {path} not found")
    try:
        with open(path) as f:
            data = json.load(f)
        return ExperimentConfig.model_validate(data)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path} is not valid JSON: {e}")
    except ValidationError as e:
        raise ConfigError(f"{path}: {e}")


class TrialRecord(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    m: int
    r: int
    n: int
    trial: int
    seed: int
    lam: float = Field(alias="lambda")
    rho: float
    iterations: int
    converged: bool
    spectral_error: float
    frobenius_error: float
    nuclear_error: float
    ratio_spectral: float
    lambda_ge_2W: bool
    cone_ok: bool
    wall_time_ms: float
    kyfan_errors: dict[int, float]
    schatten_errors: dict[str, float]
    spectral_ok: bool
    nuclear_ok: bool
    kyfan_ok: bool
    schatten_ok: bool
    dantzig_feasible: bool
    cone_ratio: float

    def to_row(self, columns: list[str]) -> dict:
        row = self.model_dump(by_alias=True, exclude={"kyfan_errors", "schatten_errors"})
        for k, value in self.kyfan_errors.items():
            row[f"kyfan_k{k}"] = value
        for label, value in self.schatten_errors.items():
            row[f"schatten_q{label}"] = value
        return {column: row.get(column, "") for column in columns}


def ground_truth(m: int, r: int, seed: int, orthogonalize: bool = False) -> np.ndarray:
    """Product of an ``m x r`` and an ``r x m`` standard Gaussian matrix.

    With ``orthogonalize`` both factors are replaced by their QR bases, which
    keeps the product well conditioned.
    """
    if not 1 <= r <= m:
        raise DomainError("r", r, f"rank must satisfy 1 <= r <= {m}")
    rng = make_rng(seed)
    left = rng.standard_normal((m, r))
    right = rng.standard_normal((r, m))
    if orthogonalize:
        left, _ = np.linalg.qr(left)
        right = np.linalg.qr(right.T)[0].T
    return left @ right


def run_trial(config: ExperimentConfig, m: int, r: int, trial: int, cache=None) -> TrialRecord:
    """Generate, solve and evaluate one ``(m, r, trial)`` cell."""
    start = time.perf_counter()
    n = config.n_for(m, r)
    trial_seed = derive_seed(config.master_seed, m, r, trial)

    A0 = ground_truth(m, r, derive_seed(trial_seed, GROUND_TRUTH_STREAM))
    spec = EnsembleSpec(kind=config.ensemble_kind, m=m, n=n, seed=derive_seed(trial_seed, ENSEMBLE_STREAM))
    ensemble = cache.get_or_sample(spec) if cache is not None else sample_ensemble(spec)
    dataset = generate_dataset(
        A0, ensemble, config.sigma_xi, NoiseKind.GAUSSIAN, derive_seed(trial_seed, NOISE_STREAM)
    )

    lam = lambda_rule(m, n, config.sigma_xi, config.lambda_variant, config.C2)
    if lam == 0:
        lam = lambda_floor(dataset, lab_config.get("noiseless_lambda_fraction", 1e-6))

    admm_config = AdmmConfig(lam=lam, **config.admm.model_dump(exclude_none=True))
    result = admm_lasso(dataset, admm_config, derive_seed(trial_seed, INIT_STREAM))

    report = error_report(result.estimate, A0, m, n, config.sigma_xi, r)
    checks = bound_check(report, theory_constants(config.alpha, config.c0), lam, n, r)
    certificate = dantzig_certificate(dataset, result.estimate, lam, r=r, beta=config.cone_beta)
    lambda_ge_2W = lam >= 2.0 * spectral_norm(dataset.noise_sum)
    wall_time_ms = (time.perf_counter() - start) * 1000.0 if config.record_wall_time else 0.0

    logger.info(f"trial m={m} r={r} #{trial}: {result.iterations_used} iterations, ratio {report.ratio_spectral:.3f}")
    return TrialRecord(
        m=m,
        r=r,
        n=n,
        trial=trial,
        seed=trial_seed,
        lam=lam,
        rho=result.rho,
        iterations=result.iterations_used,
        converged=result.converged,
        spectral_error=report.spectral,
        frobenius_error=report.frobenius,
        nuclear_error=report.nuclear,
        ratio_spectral=report.ratio_spectral,
        lambda_ge_2W=lambda_ge_2W,
        cone_ok=certificate.cone_ok,
        wall_time_ms=wall_time_ms,
        kyfan_errors=report.kyfan,
        schatten_errors={order_label(q): value for q, value in report.schatten.items()},
        spectral_ok=checks["spectral_ok"],
        nuclear_ok=checks["nuclear_ok"],
        kyfan_ok=checks["kyfan_ok"],
        schatten_ok=checks["schatten_ok"],
        dantzig_feasible=certificate.feasible,
        cone_ratio=certificate.cone_ratio,
    )
