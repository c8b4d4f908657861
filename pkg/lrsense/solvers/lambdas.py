# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

import math
from enum import Enum

import numpy as np

from lrsense.linalg.matcore import spectral_norm
from lrsense.sensing.ensemble import TraceRegressionDataset, adjoint
from lrsense.utils.status import DomainError


class LambdaVariant(str, Enum):
    THEOREM = "theorem"
    EXPERIMENT = "experiment"


EXPERIMENT_FACTOR = 7.0


def lambda_rule(m: int, n: int, sigma_xi: float, variant=LambdaVariant.EXPERIMENT, C2: float = 1.0) -> float:
    """Regularization level.

    ``theorem``: ``C2 * sigma * sqrt(m n ln m)``; ``experiment``: ``7 sigma sqrt(m n)``
    (C2 ignored).
    """
    variant = LambdaVariant(variant)
    if n < 1:
        raise DomainError("n", n, "number of measurements must be positive")
    if not sigma_xi >= 0:
        raise DomainError("sigma_xi", sigma_xi, "noise level must be nonnegative")
    if variant is LambdaVariant.THEOREM:
        if m < 2:
            raise DomainError("m", m, "theorem rule needs m >= 2 so that ln m > 0")
        return C2 * sigma_xi * math.sqrt(m * n * math.log(m))
    if m < 1:
        raise DomainError("m", m, "matrix side must be positive")
    return EXPERIMENT_FACTOR * sigma_xi * math.sqrt(m * n)


def lambda_floor(dataset: TraceRegressionDataset, fraction: float) -> float:
    """``fraction * ||X*(Y)||_inf``, a positive level for noiseless data."""
    if not fraction > 0:
        raise DomainError("fraction", fraction, "must be positive")
    level = fraction * spectral_norm(adjoint(dataset.ensemble, dataset.responses))
    return level if level > 0 else float(np.finfo(np.float64).tiny)
