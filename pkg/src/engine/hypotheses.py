"""
Three-valued hypothesis checks and shared result assembly for the checkers.

A failed hypothesis never raises: the check is reported as skipped with the
failing hypothesis named. Skipped never counts as passed.
"""

import logging
from typing import Callable, List, Optional

import numpy as np

from ..errors import ConstraintViolationError
from ..functions.certify import certify, scalar_shape
from ..functions.expressions import ScalarFn
from ..linalg.hermitian import eigvals_hermitian, hermitian_part, loewner_leq, operator_norm
from ..schemas import (
    CheckResult,
    CheckStatus,
    ConvexityProperty,
    HypothesisCheck,
    HypothesisState,
    Instance,
    OrderVerdict,
    ToleranceConfig,
)

logger = logging.getLogger(__name__)

HYPOTHESIS_DIM = 3
HYPOTHESIS_TRIALS = 40
HYPOTHESIS_SEED = 2024
INVERTIBLE_FLOOR = 1e-12

HOLDS = HypothesisState.HOLDS
FAILS = HypothesisState.FAILS
NOT_APPLICABLE = HypothesisState.NOT_APPLICABLE


def condition(name: str, ok: bool, detail: str = "") -> HypothesisCheck:
    return HypothesisCheck(name=name, state=HOLDS if ok else FAILS, detail=detail)


def not_applicable(name: str, detail: str = "") -> HypothesisCheck:
    return HypothesisCheck(name=name, state=NOT_APPLICABLE, detail=detail)


def operator_property(name: str, fn: ScalarFn, prop: ConvexityProperty) -> HypothesisCheck:
    """Certify an operator property at the hypothesis budget."""
    try:
        certificate = certify(
            fn, prop, dim=HYPOTHESIS_DIM, trials=HYPOTHESIS_TRIALS, seed=HYPOTHESIS_SEED
        )
    except ValueError as e:
        return HypothesisCheck(name=name, state=FAILS, detail=str(e))
    detail = f"{fn.to_text()} {certificate.verdict.value} (max violation {certificate.max_violation:.3e})"
    return HypothesisCheck(name=name, state=HOLDS if certificate.certified else FAILS, detail=detail)


def scalar_property(name: str, fn: ScalarFn, m: float, M: float, allowed: tuple) -> HypothesisCheck:
    shape = scalar_shape(fn, m, M)
    return condition(name, shape in allowed, f"{fn.to_text()} is {shape} on [{m:.6g}, {M:.6g}]")


def positive_invertible(name: str, X: Optional[np.ndarray]) -> HypothesisCheck:
    if X is None:
        return condition(name, False, "operand missing")
    lam = eigvals_hermitian(X)
    return condition(name, lam[0] > INVERTIBLE_FLOOR * max(1.0, abs(lam[-1])), f"λ_min = {lam[0]:.3e}")


def positive_semidefinite(name: str, X: Optional[np.ndarray]) -> HypothesisCheck:
    if X is None:
        return condition(name, False, "operand missing")
    lam = eigvals_hermitian(X)
    return condition(name, lam[0] >= -INVERTIBLE_FLOOR * max(1.0, abs(lam[-1])), f"λ_min = {lam[0]:.3e}")


def within_bounds(inst: Instance) -> HypothesisCheck:
    if inst.bounds is None:
        return condition("spectral_bounds", False, "bounds (m, M) required")
    lam = eigvals_hermitian(inst.A)
    ok = inst.bounds.contains(lam)
    return condition(
        "spectral_bounds", ok,
        f"spectrum [{lam[0]:.6g}, {lam[-1]:.6g}] within [{inst.bounds.m:.6g}, {inst.bounds.M:.6g}]",
    )


def require(value: Optional[float], name: str) -> float:
    if value is None:
        raise ConstraintViolationError(f"parameter {name} is required")
    return float(value)


def blocking(hypotheses: List[HypothesisCheck]) -> List[HypothesisCheck]:
    return [h for h in hypotheses if h.state is FAILS]


def skipped(family: str, hypotheses: List[HypothesisCheck], inst: Optional[Instance] = None) -> CheckResult:
    failed = ", ".join(h.name for h in blocking(hypotheses))
    logger.debug(f"{family} skipped: hypothesis {failed} fails")
    return CheckResult(
        family=family,
        status=CheckStatus.SKIPPED,
        hypotheses=hypotheses,
        witness=inst,
        notes=[f"hypothesis failed: {failed}"],
    )


def gate(
    family: str,
    inst: Instance,
    enforce: bool,
    hypotheses: List[HypothesisCheck],
) -> Optional[CheckResult]:
    """Return a skipped result when enforcement is on and a hypothesis fails."""
    if enforce and blocking(hypotheses):
        return skipped(family, hypotheses, inst)
    return None


def order_result(
    family: str,
    lhs: np.ndarray,
    rhs: np.ndarray,
    tol: ToleranceConfig,
    hypotheses: List[HypothesisCheck],
    inst: Instance,
    decide: Callable[..., OrderVerdict] = loewner_leq,
    **extra,
) -> CheckResult:
    """Assemble a result for lhs ≤ rhs, lhs being the side claimed smaller."""
    lhs, rhs = hermitian_part(lhs), hermitian_part(rhs)
    verdict = decide(lhs, rhs, tol)
    return CheckResult(
        family=family,
        status=CheckStatus.PASSED if verdict.holds else CheckStatus.FAILED,
        lhs=lhs,
        rhs=rhs,
        verdict=verdict,
        hypotheses=hypotheses,
        witness=inst,
        **extra,
    )


def worst_of(verdicts: List[OrderVerdict]) -> OrderVerdict:
    """Combine link verdicts: holds iff all hold; reports the most negative gap."""
    worst = min(verdicts, key=lambda v: v.gap_min_eig + v.tolerance_used)
    return OrderVerdict(
        holds=all(v.holds for v in verdicts),
        gap_min_eig=worst.gap_min_eig,
        tolerance_used=worst.tolerance_used,
    )


def scale_of(*mats: np.ndarray) -> float:
    return max(1.0, *(operator_norm(m) for m in mats))
