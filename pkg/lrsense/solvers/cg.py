# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

"""Matrix-free conjugate gradient for symmetric positive definite operators."""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

logger = logging.getLogger(__name__)


@dataclass
class CGResult:
    x: np.ndarray
    iterations: int
    converged: bool
    residual_norm: float  # ||apply(x) - b|| / ||b||, recomputed from x


def conjugate_gradient(
    apply: Callable[[np.ndarray], np.ndarray],
    b: np.ndarray,
    x0: Optional[np.ndarray] = None,
    rtol: float = 1e-8,
    maxiter: int = 400,
) -> CGResult:
    """Solve ``apply(x) = b`` until ``||apply(x) - b|| <= rtol * ||b||``.

    The recursive residual is replaced by the true one whenever it claims
    convergence, so ``converged`` always refers to the true residual.

    Args:
        apply: The operator, acting on flat vectors.
        b: Right-hand side.
        x0: Warm start (zeros when omitted).
        rtol: Relative residual tolerance.
        maxiter: Cap on operator applications inside the loop.

    Returns:
        CGResult: Solution, iteration count and convergence report.
    """
    b = np.asarray(b, dtype=np.float64)
    bnorm_sq = float(b @ b)
    if bnorm_sq == 0:
        return CGResult(x=np.zeros_like(b), iterations=0, converged=True, residual_norm=0.0)

    x = np.zeros_like(b) if x0 is None else np.array(x0, dtype=np.float64)
    r = b - apply(x)
    p = r.copy()
    rsq = float(r @ r)
    target_sq = rtol**2 * bnorm_sq

    iterations = 0
    converged = False
    while True:
        if rsq <= target_sq:
            # residual replacement
            r = b - apply(x)
            rsq = float(r @ r)
            if rsq <= target_sq:
                converged = True
                break
            p = r.copy()
        if iterations >= maxiter:
            break
        q = apply(p)
        curvature = float(p @ q)
        if curvature <= 0:
            logger.warning(f"CG breakdown: nonpositive curvature {curvature:.3e}")
            break
        alpha = rsq / curvature
        x = x + alpha * p
        r = r - alpha * q
        rsq_new = float(r @ r)
        p = r + (rsq_new / rsq) * p
        rsq = rsq_new
        iterations += 1

    if not converged:
        rsq = float(np.sum((apply(x) - b) ** 2))
    residual = float(np.sqrt(rsq / bnorm_sq))
    return CGResult(x=x, iterations=iterations, converged=converged, residual_norm=residual)
