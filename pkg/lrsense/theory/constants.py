# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

"""Constants of the error bounds and the isometry assumption behind them."""

import math
from dataclasses import dataclass

from lrsense.utils.status import DomainError

DANTZIG_C0 = 1.0
LASSO_C0 = 3.0


@dataclass(frozen=True)
class TheoryConstants:
    alpha: float
    c0: float
    c1: float
    c_d: float
    c_d_prime: float


def _check(alpha: float, c0: float):
    if not alpha > 1:
        raise DomainError("alpha", alpha, "must exceed 1 (c1 = sqrt(1 - 1/alpha) is undefined otherwise)")
    if not c0 > 0:
        raise DomainError("c0", c0, "cone constant must be positive")


def theory_constants(alpha: float, c0: float) -> TheoryConstants:
    """Compute c1, c_d and c_d' for the spectral, nuclear and Ky-Fan bounds.

    ``c1 = sqrt(1 - 1/alpha)``,
    ``c_d = 3/2 + 3 (1 + c0)² / (2 alpha (1 + 2 c0) c1²)``,
    ``c_d' = 3 (1 + c0)² / (2 c1²)``.
    """
    _check(alpha, c0)
    c1_sq = 1.0 - 1.0 / alpha
    c_d = 1.5 + 3.0 * (1 + c0) ** 2 / (2.0 * alpha * (1 + 2 * c0) * c1_sq)
    c_d_prime = 3.0 * (1 + c0) ** 2 / (2.0 * c1_sq)
    return TheoryConstants(alpha=alpha, c0=c0, c1=math.sqrt(c1_sq), c_d=c_d, c_d_prime=c_d_prime)


def rip_assumption_threshold(alpha: float, c0: float, r: int) -> float:
    """Largest delta_2 allowed by the isometry assumption: ``1 / (alpha (1 + 2 c0) r)``."""
    _check(alpha, c0)
    if r < 1:
        raise DomainError("r", r, "rank must be at least 1")
    return 1.0 / (alpha * (1 + 2 * c0) * r)


def assumption_holds(delta_2: float, alpha: float, c0: float, r: int) -> bool:
    return delta_2 <= rip_assumption_threshold(alpha, c0, r)


def sample_size_condition(m: int, n: int, r: int, alpha: float, c0: float, C1: float = 1.0) -> tuple[bool, float]:
    """Check ``n >= C1 m [alpha² (1+2c0)² r² ∨ alpha (1+2c0) r ln(m) ln(n)]``.

    Returns:
        tuple: ``(holds, required)``.
    """
    _check(alpha, c0)
    if m < 2 or n < 1 or r < 1:
        raise DomainError("(m, n, r)", (m, n, r), "need m >= 2, n >= 1, r >= 1")
    spread = alpha * (1 + 2 * c0) * r
    required = C1 * m * max(spread**2, spread * math.log(m) * math.log(n))
    return n >= required, required
