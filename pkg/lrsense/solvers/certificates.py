# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

"""Feasibility and optimality certificates for an estimate."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from lrsense.linalg.matcore import cone_membership, numerical_rank, singular_values, spectral_norm, svd
from lrsense.sensing.ensemble import TraceRegressionDataset, adjoint, forward
from lrsense.solvers.admm import check_dataset_operand
from lrsense.utils.status import DomainError

DEFAULT_CONE_BETA = 3.0


@dataclass(frozen=True)
class DantzigCertificate:
    residual_norm: float
    feasible: bool
    cone_ok: Optional[bool] = None
    cone_ratio: Optional[float] = None
    gram_residual: Optional[float] = None
    gram_ok: Optional[bool] = None


@dataclass(frozen=True)
class KktCertificate:
    dual_norm: float
    alignment_error: float
    off_support_norm: float
    support_rank: int

    def holds(self, tol: float = 1e-4) -> bool:
        return (
            self.dual_norm <= 1 + tol
            and self.alignment_error <= tol
            and self.off_support_norm <= 1 + tol
        )


def dantzig_certificate(
    dataset: TraceRegressionDataset,
    A_hat,
    lam: float,
    r: Optional[int] = None,
    beta: float = DEFAULT_CONE_BETA,
) -> DantzigCertificate:
    """Check ``||X*(X(A_hat) - Y)||_inf <= lam`` and, with ground truth, the cone and Gram conditions.

    Args:
        dataset: Observations, optionally carrying A0.
        A_hat: The estimate.
        lam: Regularization level.
        r: Cone rank; defaults to the numerical rank of A0.
        beta: Cone aperture (3 for the LASSO).
    """
    A_hat = check_dataset_operand(dataset, A_hat, "A_hat")
    if not lam > 0:
        raise DomainError("lambda", lam, "must be positive")
    ensemble = dataset.ensemble
    residual_norm = spectral_norm(adjoint(ensemble, forward(ensemble, A_hat) - dataset.responses))
    feasible = residual_norm <= lam
    if dataset.A0 is None:
        return DantzigCertificate(residual_norm=residual_norm, feasible=feasible)

    Delta = A_hat - dataset.A0
    if r is None:
        r = max(numerical_rank(dataset.A0), 1)
    cone_ok, cone_ratio = cone_membership(Delta, r, beta)
    gram_residual = spectral_norm(adjoint(ensemble, forward(ensemble, Delta)))
    return DantzigCertificate(
        residual_norm=residual_norm,
        feasible=feasible,
        cone_ok=cone_ok,
        cone_ratio=cone_ratio,
        gram_residual=gram_residual,
        gram_ok=gram_residual <= 1.5 * lam,
    )


def lasso_kkt_certificate(dataset: TraceRegressionDataset, A_hat, lam: float, rtol: float = 1e-6) -> KktCertificate:
    """Measure how well ``2 X*(Y - X(A_hat)) / lam`` sits in the nuclear-norm subdifferential at A_hat.

    With ``A_hat = U_r S V_rᵀ`` on its numerical support, optimality requires
    ``U_rᵀ G V_r = I``, ``||G||_inf <= 1`` and the off-support block of G to
    have spectral norm at most 1.
    """
    A_hat = check_dataset_operand(dataset, A_hat, "A_hat")
    if not lam > 0:
        raise DomainError("lambda", lam, "must be positive")
    ensemble = dataset.ensemble
    G = 2.0 * adjoint(ensemble, dataset.responses - forward(ensemble, A_hat)) / lam

    factors = svd(A_hat)
    s = factors.singular_values
    k = int(np.count_nonzero(s > rtol * s[0])) if s[0] > 0 else 0
    m = dataset.m
    if k == 0:
        return KktCertificate(
            dual_norm=spectral_norm(G), alignment_error=0.0, off_support_norm=spectral_norm(G), support_rank=0
        )
    Ur, Vr = factors.U[:, :k], factors.V[:, :k]
    alignment = Ur.T @ G @ Vr - np.eye(k)
    alignment_error = float(singular_values(alignment)[0])
    if k == m:
        off_support_norm = 0.0
    else:
        off = factors.U[:, k:].T @ G @ factors.V[:, k:]
        off_support_norm = float(singular_values(off)[0])
    return KktCertificate(
        dual_norm=spectral_norm(G),
        alignment_error=alignment_error,
        off_support_norm=off_support_norm,
        support_rank=k,
    )
