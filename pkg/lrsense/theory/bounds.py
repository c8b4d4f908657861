# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

"""Multi-norm error reports and the bound checks applied to them."""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from lrsense.linalg.matcore import (
    INF,
    as_matrix,
    check_same_shape,
    kyfan_from_spectrum,
    numerical_rank,
    schatten_from_spectrum,
    singular_values,
)
from lrsense.theory.constants import TheoryConstants
from lrsense.utils.status import DimensionError, DomainError

SCHATTEN_GRID = (1.0, 1.5, 2.0, 3.0, 4.0, INF)


def order_label(q) -> str:
    """Column-friendly label: 1, 1.5, 2, ... and inf."""
    if q is INF:
        return "inf"
    return f"{q:g}"


@dataclass
class ErrorReport:
    spectral: float
    frobenius: float
    nuclear: float
    schatten: dict = field(default_factory=dict)
    kyfan: dict = field(default_factory=dict)
    ratio_spectral: float = 0.0


def error_report(A_hat, A0, m: int, n: int, sigma_xi: float, r: Optional[int] = None) -> ErrorReport:
    """All error norms of ``A_hat - A0`` from one SVD.

    Ky-Fan indices run over ``1..min(m, 2r + 2)`` with ``r`` defaulting to the
    numerical rank of A0. ``ratio_spectral`` divides the spectral error by
    ``sigma_xi sqrt(m/n)``.
    """
    A_hat = as_matrix(A_hat, "A_hat")
    A0 = as_matrix(A0, "A0")
    check_same_shape(A_hat, A0, "A0")
    if A0.shape[0] != m:
        raise DimensionError("m", A0.shape[0], m)
    if n < 1:
        raise DomainError("n", n, "number of measurements must be positive")
    if r is None:
        r = max(numerical_rank(A0), 1)

    s = singular_values(A_hat - A0)
    spectral = schatten_from_spectrum(s, INF)
    schatten = {q: schatten_from_spectrum(s, q) for q in SCHATTEN_GRID}
    kyfan = {k: kyfan_from_spectrum(s, k) for k in range(1, min(m, 2 * r + 2) + 1)}

    scale = sigma_xi * math.sqrt(m / n)
    if scale > 0:
        ratio = spectral / scale
    else:
        ratio = math.inf if spectral > 0 else 0.0

    return ErrorReport(
        spectral=spectral,
        frobenius=schatten[2.0],
        nuclear=schatten[1.0],
        schatten=schatten,
        kyfan=kyfan,
        ratio_spectral=ratio,
    )


def bound_check(report: ErrorReport, constants: TheoryConstants, lam: float, n: int, r: int) -> dict:
    """Compare a report with the explicit bounds (inclusive).

    spectral <= c_d lam/n; nuclear <= c_d' r lam/n;
    Ky-Fan k <= c_d (1 + c0) min(k, r) lam/n;
    Schatten q <= (c_d' r lam/n)^(1/q) (c_d lam/n)^(1 - 1/q).
    """
    if r < 1:
        raise DomainError("r", r, "rank must be at least 1")
    unit = lam / n
    spectral_bound = constants.c_d * unit
    nuclear_bound = constants.c_d_prime * r * unit

    checks = {
        "spectral_ok": report.spectral <= spectral_bound,
        "nuclear_ok": report.nuclear <= nuclear_bound,
    }
    for k, value in report.kyfan.items():
        checks[f"kyfan_ok_k{k}"] = value <= constants.c_d * (1 + constants.c0) * min(k, r) * unit
    checks["kyfan_ok"] = all(checks[f"kyfan_ok_k{k}"] for k in report.kyfan)

    for q, value in report.schatten.items():
        inv = 0.0 if q is INF else 1.0 / q
        bound = nuclear_bound**inv * spectral_bound ** (1 - inv)
        checks[f"schatten_ok_q{order_label(q)}"] = value <= bound
    checks["schatten_ok"] = all(checks[f"schatten_ok_q{order_label(q)}"] for q in report.schatten)
    return checks

