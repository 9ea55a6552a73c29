"""
Positivity of the moment block matrix [Φ(A^{i+j})]_{i,j=0..r}.
"""

import logging
from typing import Optional

import numpy as np

from ..config import get_settings
from ..errors import ConstraintViolationError
from ..linalg.hermitian import as_hermitian, hermitian_part
from ..maps.positive_maps import MapSpec
from ..schemas import CheckResult, ExponentParams, Instance, ToleranceConfig
from .hypotheses import order_result

logger = logging.getLogger(__name__)


def moment_block(phi: MapSpec, A: np.ndarray, r: int) -> np.ndarray:
    """(r+1)×(r+1) block matrix with (i, j) block Φ(A^{i+j})."""
    a = as_hermitian(A)
    powers = [np.eye(a.shape[0], dtype=complex)]
    for _ in range(2 * r):
        powers.append(hermitian_part(powers[-1] @ a))
    images = [phi(p) for p in powers]
    return np.block([[images[i + j] for j in range(r + 1)] for i in range(r + 1)])


def check_moment_matrix(
    phi: MapSpec, A: np.ndarray, r: int, tol: Optional[ToleranceConfig] = None
) -> CheckResult:
    """
    Verify 0 ≤ [Φ(A^{i+j})]; r = 1 is Kadison's 2×2 block criterion.

    Raises:
        ConstraintViolationError: if r < 1
    """
    if int(r) != r or r < 1:
        raise ConstraintViolationError(f"moment order must be an integer ≥ 1, got {r}")
    r = int(r)
    tol = tol or get_settings().tolerance
    block = moment_block(phi, A, r)
    inst = Instance(phi=phi, A=as_hermitian(A), params=ExponentParams(r=float(r)))
    result = order_result("MOMENT", np.zeros_like(block), block, tol, [], inst)
    logger.debug(f"MOMENT r={r}: λ_min = {result.gap:.3e}")
    return result
