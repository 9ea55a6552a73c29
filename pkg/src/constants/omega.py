"""
The refinement term ω(A, r) of Φ(A)^r − Φ(A^r) ≥ ω(A, r)·I.
"""

import logging

import numpy as np

from ..errors import ConstraintViolationError, SingularOperandError
from ..linalg.hermitian import inv_positive, min_eig, mpower, operator_norm
from ..maps.positive_maps import MapSpec
from ..schemas import OmegaResult

logger = logging.getLogger(__name__)

SEQUENCE_EXPONENTS = range(11)


def omega(phi: MapSpec, A: np.ndarray, r: float) -> OmegaResult:
    """
    ω(A, r) = ‖Φ(A)‖^r − (‖Φ(A)‖ − λ)^r with λ = λ_min(Φ(A) − Φ(A^r)^{1/r}).

    λ is the infimum over n of ‖(Φ(A) + I/n − Φ(A^r)^{1/r})^{-1}‖^{-1}; the
    terms for n = 1, 2, 4, ..., 1024 are returned as sequence_tail.

    Raises:
        ConstraintViolationError: if r is outside [1/2, 1]
        SingularOperandError: if A is not positive invertible
    """
    if not 0.5 <= r <= 1:
        raise ConstraintViolationError(f"omega needs r in [1/2, 1], got {r}")
    if min_eig(A) <= 1e-12:
        raise SingularOperandError("omega needs a positive invertible A")

    phi_a = phi.apply(A)
    lower = mpower(phi.apply(mpower(A, r)), 1.0 / r)
    gap = phi_a - lower
    infimum = max(0.0, min_eig(gap))
    norm = operator_norm(phi_a)

    eye = np.eye(phi_a.shape[0])
    tail = []
    for k in SEQUENCE_EXPONENTS:
        shifted = gap + eye / 2**k
        tail.append(1.0 / operator_norm(inv_positive(shifted)))

    value = max(0.0, norm**r - max(norm - infimum, 0.0) ** r)
    logger.debug(f"omega(r={r}): infimum={infimum:.6g}, value={value:.6g}")
    return OmegaResult(value=value, infimum=infimum, sequence_tail=tail)
