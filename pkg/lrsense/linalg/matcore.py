# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

"""Dense matrix primitives: SVD, Schatten and Ky-Fan norms, truncation, SVT and cones.

Matrices are square float64 ``numpy.ndarray`` objects. Every public function
validates its input through :func:`as_matrix`.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg

from lrsense.utils.rng import make_rng
from lrsense.utils.status import DimensionError, DomainError


class Order(Enum):
    INF = "inf"

    def __str__(self):
        return self.value


INF = Order.INF

POWER_ITERATION_MIN_SIDE = 65
POWER_ITERATIONS = 200
POWER_TOLERANCE = 1e-10
POWER_START_SEED = 0x5EED

# Slack for ratio-vs-beta comparisons (a few ulps of SVD round-off)
RATIO_RTOL = 1e-12


@dataclass(frozen=True)
class SVDFactors:
    U: np.ndarray
    singular_values: np.ndarray
    V: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.singular_values) @ self.V.T


def as_matrix(A, name: str = "A") -> np.ndarray:
    """Validate ``A`` as a finite square matrix and return it as float64.

    Raises:
        DimensionError: If ``A`` is not a square 2-D array.
        DomainError: If ``A`` has NaN or infinite entries.
    """
    arr = np.asarray(A, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise DimensionError(name, "non-empty square matrix", arr.shape)
    if not np.all(np.isfinite(arr)):
        raise DomainError(name, "non-finite entries", "all entries must be finite")
    return arr


def check_same_shape(A: np.ndarray, B: np.ndarray, name: str = "B"):
    if A.shape != B.shape:
        raise DimensionError(name, A.shape, B.shape)


def normalize_order(q, name: str = "q"):
    """Map ``q`` to a float >= 1 or :data:`INF` (``math.inf`` and ``"inf"`` included)."""
    if q is INF:
        return INF
    if isinstance(q, str):
        if q.strip().lower() in ("inf", "infinity"):
            return INF
        try:
            q = float(q)
        except ValueError:
            raise DomainError(name, q, "must be a real number >= 1 or inf")
    q = float(q)
    if math.isinf(q) and q > 0:
        return INF
    if not q >= 1:
        raise DomainError(name, q, "Schatten order must satisfy q >= 1")
    return q


def _inverse(q) -> float:
    return 0.0 if q is INF else 1.0 / q


def _lapack_svd(A, compute_uv=True):
    # gesdd can fail to converge; fall back to gesvd
    try:
        return scipy.linalg.svd(A, compute_uv=compute_uv, lapack_driver="gesdd", check_finite=False)
    except np.linalg.LinAlgError:
        return scipy.linalg.svd(A, compute_uv=compute_uv, lapack_driver="gesvd", check_finite=False)


def svd(A) -> SVDFactors:
    """Full SVD with a deterministic sign convention.

    The first entry of each left singular vector above round-off is made
    nonnegative; the matching right vector is flipped with it.
    """
    A = as_matrix(A)
    U, s, Vt = _lapack_svd(A)
    V = Vt.T.copy()
    U = U.copy()
    cutoff = 1e-12
    for j in range(U.shape[1]):
        column = U[:, j]
        nonzero = np.flatnonzero(np.abs(column) > cutoff)
        if nonzero.size and column[nonzero[0]] < 0:
            U[:, j] = -column
            V[:, j] = -V[:, j]
    return SVDFactors(U=U, singular_values=s, V=V)


def singular_values(A) -> np.ndarray:
    """Nonincreasing singular values of ``A``."""
    return _lapack_svd(as_matrix(A), compute_uv=False)


def schatten_from_spectrum(s: np.ndarray, q) -> float:
    q = normalize_order(q)
    if s.size == 0:
        return 0.0
    if q is INF:
        return float(s[0])
    if q == 1:
        return float(np.sum(s))
    if q == 2:
        return float(np.linalg.norm(s))
    top = s[0]
    if top == 0:
        return 0.0
    return float(top * np.sum((s / top) ** q) ** (1.0 / q))


def kyfan_from_spectrum(s: np.ndarray, k: int) -> float:
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= s.size:
        raise DomainError("k", k, f"Ky-Fan index must satisfy 1 <= k <= {s.size}")
    return float(np.sum(s[:k]))


def schatten_norm(A, q) -> float:
    """Schatten-q norm; ``q`` may be :data:`INF` for the spectral norm."""
    q = normalize_order(q)
    return schatten_from_spectrum(singular_values(A), q)


def kyfan_norm(A, k: int) -> float:
    return kyfan_from_spectrum(singular_values(A), k)


def frobenius_inner(A, B) -> float:
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    check_same_shape(A, B)
    return float(np.vdot(A, B))


def numerical_rank(A, rtol: float = 1e-9) -> int:
    """Count of singular values above ``rtol`` times the largest one."""
    s = singular_values(A)
    if s[0] == 0:
        return 0
    return int(np.count_nonzero(s > rtol * s[0]))


def spectral_norm(A) -> float:
    """Largest singular value.

    Full SVD for sides up to 64, otherwise power iteration on AᵀA from a fixed
    start vector.
    """
    A = as_matrix(A)
    m = A.shape[0]
    if m < POWER_ITERATION_MIN_SIDE:
        return float(singular_values(A)[0])

    v = make_rng(POWER_START_SEED).standard_normal(m)
    v /= np.linalg.norm(v)
    estimate = 0.0
    for _ in range(POWER_ITERATIONS):
        w = A.T @ (A @ v)
        norm = np.linalg.norm(w)
        if norm == 0:
            return 0.0
        v = w / norm
        if abs(norm - estimate) <= POWER_TOLERANCE * norm:
            estimate = norm
            break
        estimate = norm
    return float(math.sqrt(estimate))


def rank_truncate(A, r: int) -> tuple[np.ndarray, np.ndarray]:
    """Split ``A`` into its best rank-``r`` part and the remainder.

    Returns:
        tuple: ``(head, tail)`` with ``head + tail == A``.
    """
    A = as_matrix(A)
    m = A.shape[0]
    if not isinstance(r, (int, np.integer)) or not 0 <= r <= m:
        raise DomainError("r", r, f"truncation rank must satisfy 0 <= r <= {m}")
    if r == 0:
        return np.zeros_like(A), A.copy()
    factors = svd(A)
    head = (factors.U[:, :r] * factors.singular_values[:r]) @ factors.V[:, :r].T
    return head, A - head


def svt(A, tau: float) -> np.ndarray:
    """Singular value soft-thresholding, the proximal map of ``tau * ||.||_1``."""
    A = as_matrix(A)
    if not tau >= 0:
        raise DomainError("tau", tau, "threshold must be nonnegative")
    if tau == 0:
        return A.copy()
    factors = svd(A)
    shrunk = np.maximum(factors.singular_values - tau, 0.0)
    return (factors.U * shrunk) @ factors.V.T


def cone_membership(Delta, r: int, beta: float) -> tuple[bool, float]:
    """Test ``||Delta_{-max(r)}||_1 <= beta * ||Delta_{max(r)}||_1``.

    Returns:
        tuple: ``(is_member, ratio)``. The ratio is 0 for the zero matrix and
        ``inf`` when the head vanishes but the tail does not.
    """
    Delta = as_matrix(Delta, "Delta")
    m = Delta.shape[0]
    if not isinstance(r, (int, np.integer)) or not 1 <= r <= m:
        raise DomainError("r", r, f"cone rank must satisfy 1 <= r <= {m}")
    if not beta > 0:
        raise DomainError("beta", beta, "cone aperture must be positive")

    s = singular_values(Delta).copy()
    s[s <= m * np.finfo(np.float64).eps * s[0]] = 0.0
    head = float(np.sum(s[:r]))
    tail = float(np.sum(s[r:]))
    if head == 0:
        ratio = 0.0 if tail == 0 else math.inf
    else:
        ratio = tail / head
    return ratio <= beta * (1 + RATIO_RTOL), ratio


def interpolation_slack(A, p, q, r) -> float:
    """Slack of ``||A||_q <= ||A||_p^theta * ||A||_r^(1-theta)``.

    ``theta`` solves ``theta/p + (1-theta)/r = 1/q``. The value is mathematically
    nonnegative.
    """
    p, q, r = normalize_order(p, "p"), normalize_order(q, "q"), normalize_order(r, "r")
    if p is INF or q is INF or not (p < q and (r is INF or q < r)):
        raise DomainError("(p, q, r)", (str(p), str(q), str(r)), "need 1 <= p < q < r <= inf")

    theta = (_inverse(q) - _inverse(r)) / (_inverse(p) - _inverse(r))
    s = singular_values(A)
    norm_p = schatten_from_spectrum(s, p)
    norm_q = schatten_from_spectrum(s, q)
    norm_r = schatten_from_spectrum(s, r)
    return norm_p**theta * norm_r ** (1 - theta) - norm_q
