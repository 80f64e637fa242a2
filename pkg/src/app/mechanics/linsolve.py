"""Column-pivoted QR solve with a rank-revealing condition estimate."""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from config.settings import SINGULAR_COND_LIMIT
from src.core.errors import SingularHessianError


@dataclass(frozen=True)
class PivotedSolve:
    solution: np.ndarray
    condition: float


def condition_estimate(r_diagonal: np.ndarray) -> float:
    """|R_00| / |R_kk| from a column-pivoted QR; inf when R has a zero pivot."""
    d = np.abs(r_diagonal)
    if d.size == 0 or d[0] == 0.0 or d[-1] == 0.0:
        return float("inf")
    return float(d[0] / d[-1])


def solve_pivoted(matrix: np.ndarray, rhs: np.ndarray, cond_limit: float = SINGULAR_COND_LIMIT) -> PivotedSolve:
    """
    Solve matrix @ x = rhs.

    Raises:
        SingularHessianError: If the condition estimate exceeds cond_limit.
    """
    q, r, piv = scipy.linalg.qr(matrix, pivoting=True, check_finite=False)
    condition = condition_estimate(np.diag(r))
    if not condition <= cond_limit:
        raise SingularHessianError(condition)
    z = scipy.linalg.solve_triangular(r, q.T @ rhs, check_finite=False)
    x = np.empty_like(z)
    x[piv] = z
    return PivotedSolve(x, condition)
