# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

"""Matrix LASSO solved by ADMM with a conjugate-gradient A-update.

Minimizes ``sum_j (<A, X_j> - Y_j)² + lambda ||A||_1`` through the splitting
A = B with augmented Lagrangian parameter rho:

    A <- argmin sum_j (Y_j - <A, X_j>)² + <A - B, Z> + rho/2 ||A - B||_2²
    B <- svt(A + Z / rho, lambda / rho)
    Z <- Z + rho (A - B)

The loop stops when both the primal gap ``||A - B||_2²`` and the dual
residual ``rho ||B_new - B_old||_2`` are under their tolerances. A small
primal gap alone is reached while B is still moving whenever lambda / rho
is small.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from lrsense.config import get_admm_defaults
from lrsense.linalg.matcore import as_matrix, schatten_norm, svt
from lrsense.sensing.container import save_matrices
from lrsense.sensing.ensemble import TraceRegressionDataset, forward
from lrsense.solvers.cg import CGResult, conjugate_gradient
from lrsense.utils.rng import make_rng
from lrsense.utils.status import DimensionError, DomainError, SolveStatus

logger = logging.getLogger(__name__)

TOLERANCE_PER_ENTRY = 1e-10


class AdmmSettings(BaseModel):
    """Solver knobs shared by every solve; ``None`` means derive from the problem size."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    rho: Optional[float] = Field(default=None, gt=0)
    max_iterations: int = Field(default=500, ge=1)
    tolerance: Optional[float] = Field(default=None, gt=0)
    dual_tolerance: Optional[float] = Field(default=None, gt=0)
    cg_tolerance: float = Field(default=1e-8, gt=0)
    cg_max_iterations: int = Field(default=400, ge=1)

    @model_validator(mode="before")
    @classmethod
    def _fill_lab_defaults(cls, data):
        if isinstance(data, dict):
            data = {**get_admm_defaults(), **data}
        return data

    def resolve(self, m: int, n: int) -> tuple[float, float]:
        """Return ``(rho, tolerance)``: rho defaults to n, tolerance to 1e-10 * m²."""
        rho = self.rho if self.rho is not None else float(max(n, 1))
        tolerance = self.tolerance if self.tolerance is not None else TOLERANCE_PER_ENTRY * m * m
        return rho, tolerance

    def resolve_dual(self, rho: float, tolerance: float) -> float:
        """Dual residual bound, ``rho * sqrt(tolerance)`` unless set explicitly."""
        if self.dual_tolerance is not None:
            return self.dual_tolerance
        return rho * float(np.sqrt(tolerance))


class AdmmConfig(AdmmSettings):
    lam: float = Field(alias="lambda", gt=0)


@dataclass
class SolveResult:
    estimate: np.ndarray
    iterations_used: int
    converged: bool
    status: SolveStatus
    primal_gap_trace: np.ndarray
    objective_trace: np.ndarray
    dual_residual_trace: np.ndarray
    dual_variable: np.ndarray
    lam: float
    rho: float
    tolerance: float
    cg_iterations: int = 0
    cg_failures: int = 0
    dual_tolerance: float = 0.0
    # 1-based iteration whose B is returned
    estimate_iteration: int = 0

    def to_dict(self):
        return {
            "converged": self.converged,
            "status": self.status.name,
            "iterations": self.iterations_used,
            "lambda": self.lam,
            "rho": self.rho,
            "tolerance": self.tolerance,
            "dual_tolerance": self.dual_tolerance,
            "estimate_iteration": self.estimate_iteration,
            "cg_iterations": self.cg_iterations,
            "cg_failures": self.cg_failures,
            "primal_gap_trace": self.primal_gap_trace.tolist(),
            "objective_trace": self.objective_trace.tolist(),
            "dual_residual_trace": self.dual_residual_trace.tolist(),
        }

    def to_json(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=4)

    def save_estimate(self, path):
        save_matrices(path, self.estimate)


def check_dataset_operand(dataset: TraceRegressionDataset, A, name: str) -> np.ndarray:
    A = as_matrix(A, name)
    if A.shape != (dataset.m, dataset.m):
        raise DimensionError(name, (dataset.m, dataset.m), A.shape)
    return A


def lasso_objective(dataset: TraceRegressionDataset, A, lam: float) -> float:
    """``sum_j (<A, X_j> - Y_j)² + lam * ||A||_1``."""
    A = check_dataset_operand(dataset, A, "A")
    residual = forward(dataset.ensemble, A) - dataset.responses
    return float(residual @ residual) + lam * schatten_norm(A, 1)


def a_update(
    dataset: TraceRegressionDataset,
    B,
    Z,
    rho: float,
    cg_tolerance: float = 1e-8,
    cg_max_iterations: int = 400,
    warm_start=None,
) -> tuple[np.ndarray, CGResult]:
    """Solve ``(2 X*X + rho I) A = 2 X*(Y) - Z + rho B`` by conjugate gradient.

    Returns:
        tuple: The new A and the CG report (``converged`` is False at the cap).
    """
    if not rho > 0:
        raise DomainError("rho", rho, "augmented Lagrangian parameter must be positive")
    B = check_dataset_operand(dataset, B, "B")
    Z = check_dataset_operand(dataset, Z, "Z")
    design = dataset.ensemble.design

    def apply(vec):
        return 2.0 * (design.T @ (design @ vec)) + rho * vec

    rhs = 2.0 * (design.T @ dataset.responses) - Z.ravel() + rho * B.ravel()
    x0 = None if warm_start is None else check_dataset_operand(dataset, warm_start, "warm_start").ravel()
    report = conjugate_gradient(apply, rhs, x0=x0, rtol=cg_tolerance, maxiter=cg_max_iterations)
    if not report.converged:
        logger.warning(
            f"CG stopped at {report.iterations} iterations with relative residual {report.residual_norm:.3e}"
        )
    m = dataset.m
    return report.x.reshape(m, m), report


def admm_lasso(
    dataset: TraceRegressionDataset, config: AdmmConfig, init_seed: int = 0, callback=None
) -> SolveResult:
    """Run ADMM until both residuals are within tolerance or the iteration cap.

    A and B start from seeded Gaussian entries scaled by 1/m and Z from zero.
    A converged solve returns the final B; at the cap the B with the lowest
    objective is returned.

    Args:
        callback (callable, optional): Called as ``callback(k, A, B, Z)`` after the
            B-update of iteration ``k`` (1-based), with Z still the dual that fed it.
    """
    m, n = dataset.m, dataset.n
    rho, tolerance = config.resolve(m, n)
    dual_tolerance = config.resolve_dual(rho, tolerance)
    lam = config.lam

    rng = make_rng(init_seed)
    A = rng.standard_normal((m, m)) / m
    B = rng.standard_normal((m, m)) / m
    Z = np.zeros((m, m))

    gaps, objectives, duals = [], [], []
    best_B, best_objective, best_iteration = B, np.inf, 0
    cg_iterations, cg_failures = 0, 0
    converged = False
    for k in range(1, config.max_iterations + 1):
        A, report = a_update(
            dataset, B, Z, rho, config.cg_tolerance, config.cg_max_iterations, warm_start=A
        )
        cg_iterations += report.iterations
        cg_failures += int(not report.converged)

        B_old = B
        B = svt(A + Z / rho, lam / rho)
        if callback is not None:
            callback(k, A, B, Z)
        Z = Z + rho * (A - B)

        gap = float(np.sum((A - B) ** 2))
        dual = rho * float(np.linalg.norm(B - B_old))
        objective = lasso_objective(dataset, B, lam)
        gaps.append(gap)
        duals.append(dual)
        objectives.append(objective)
        if objective < best_objective:
            best_B, best_objective, best_iteration = B, objective, k
        logger.debug(f"ADMM iteration {k}: gap={gap:.3e} dual={dual:.3e} objective={objective:.6e}")

        if gap <= tolerance and dual <= dual_tolerance:
            converged = True
            break

    if converged:
        estimate, estimate_iteration = B, len(gaps)
    else:
        estimate, estimate_iteration = best_B, best_iteration
        logger.warning(
            f"ADMM hit max_iterations={config.max_iterations} with primal gap {gaps[-1]:.3e} "
            f"(tol {tolerance:.3e}) and dual residual {duals[-1]:.3e} (tol {dual_tolerance:.3e}); "
            f"returning iteration {best_iteration}"
        )

    return SolveResult(
        estimate=estimate,
        iterations_used=len(gaps),
        converged=converged,
        status=SolveStatus.CONVERGED if converged else SolveStatus.MAX_ITERATIONS,
        primal_gap_trace=np.asarray(gaps),
        objective_trace=np.asarray(objectives),
        dual_residual_trace=np.asarray(duals),
        dual_variable=Z,
        lam=lam,
        rho=rho,
        tolerance=tolerance,
        cg_iterations=cg_iterations,
        cg_failures=cg_failures,
        dual_tolerance=dual_tolerance,
        estimate_iteration=estimate_iteration,
    )
