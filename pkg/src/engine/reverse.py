"""
Reverse inequalities: Kantorovich-type constants and scalar refinements.

Every result carries the constant it used in `constant`; the constant is
already folded into whichever side it multiplies or shifts.
"""

import logging
from typing import Callable, Dict, List, Optional

import numpy as np

from ..config import get_settings
from ..constants.kantorovich import k1, k2, k_m4, k_nakamoto, k_power, k_reverse_theorem
from ..constants.omega import omega
from ..functions.certify import scalar_shape
from ..functions.expressions import DeriveKind, derive
from ..linalg.hermitian import abs_op, apply_scalar_function, min_eig, mpower, operator_norm
from ..schemas import CheckResult, HypothesisCheck, Instance, ToleranceConfig
from .hypotheses import (
    FAILS,
    condition,
    gate,
    order_result,
    positive_invertible,
    positive_semidefinite,
    require,
    scalar_property,
    within_bounds,
)
from .registry import FamilyKind, family_spec

logger = logging.getLogger(__name__)

SHAPES_CONVEX = ("convex", "linear")
SHAPES_CONCAVE = ("concave", "linear")


def _fails(hyps: List[HypothesisCheck], *names: str) -> bool:
    """True when one of the named hypotheses fails; those block even when not enforced."""
    return any(h.state is FAILS and h.name in names for h in hyps)


def _positive_on_bounds(inst: Instance) -> HypothesisCheck:
    if inst.f is None or inst.bounds is None:
        return condition("f_positive_on_bounds", False, "f and bounds (m, M) required")
    grid = np.linspace(inst.bounds.m, inst.bounds.M, 1024)
    values = inst.f.evaluate(grid)
    ok = bool(np.all(np.isfinite(values)) and values.min() > 0)
    return condition("f_positive_on_bounds", ok, f"min f = {np.nanmin(values):.6g}")


def _bounds_given(inst: Instance) -> HypothesisCheck:
    return condition("bounds_given", inst.bounds is not None, "bounds (m, M) required")


def _bounded(inst: Instance, *extra: HypothesisCheck) -> List[HypothesisCheck]:
    return [
        _bounds_given(inst),
        positive_invertible("A_positive_invertible", inst.A),
        within_bounds(inst),
        *extra,
    ]


def _rev_jensen(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    hyps = _bounded(inst, _positive_on_bounds(inst))
    if _fails(hyps, "bounds_given", "f_positive_on_bounds"):
        return gate("REV_JENSEN", inst, True, hyps)
    m, M = inst.bounds.m, inst.bounds.M
    shape = scalar_shape(inst.f, m, M)
    hyps.append(scalar_property("f_convex_or_concave", inst.f, m, M, ("convex", "concave", "linear")))
    skip = gate("REV_JENSEN", inst, enforce, hyps)
    if skip:
        return skip
    phi, f = inst.phi, inst.f
    f_of_phi = apply_scalar_function(phi(inst.A), f)
    phi_of_f = phi(apply_scalar_function(inst.A, f))
    if shape == "concave":
        K = k1(inst.bounds, f)
        result = order_result("REV_JENSEN", K * f_of_phi, phi_of_f, tol, hyps, inst, constant=K)
        result.notes.append("concave branch: K₁·f(Φ(A)) ≤ Φ(f(A))")
    else:
        K = k2(inst.bounds, f)
        result = order_result("REV_JENSEN", phi_of_f, K * f_of_phi, tol, hyps, inst, constant=K)
        result.notes.append("convex branch: Φ(f(A)) ≤ K₂·f(Φ(A))")
    return result


def _rev_choi(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    p = require(inst.params.p, "p")
    hyps = _bounded(inst, condition("p_positive", p > 0, f"p = {p:.6g}"))
    skip = gate("REV_CHOI", inst, enforce or _fails(hyps, "bounds_given", "p_positive"), hyps)
    if skip:
        return skip
    K = k_power(inst.bounds, p)
    phi = inst.phi
    inner = phi(mpower(inst.A, p))
    outer = K * mpower(phi(inst.A), p)
    if p >= 1:
        return order_result("REV_CHOI", inner, outer, tol, hyps, inst, constant=K)
    return order_result("REV_CHOI", outer, inner, tol, hyps, inst, constant=K)


def _thm_reverse_f(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    hyps = _bounded(inst, _positive_on_bounds(inst))
    if _fails(hyps, "bounds_given", "f_positive_on_bounds"):
        return gate("THM_REVERSE_F", inst, True, hyps)
    m, M = inst.bounds.m, inst.bounds.M
    hyps += [
        scalar_property("f_squared_concave", derive(inst.f, DeriveKind.F_SQUARED), m, M, SHAPES_CONCAVE),
        scalar_property("t_times_f_convex", derive(inst.f, DeriveKind.T_TIMES_F), m, M, SHAPES_CONVEX),
    ]
    skip = gate("THM_REVERSE_F", inst, enforce, hyps)
    if skip:
        return skip
    K = k_reverse_theorem(inst.bounds, inst.f)
    phi = inst.phi
    f_a = apply_scalar_function(inst.A, inst.f)
    lhs = phi(inst.A @ f_a)
    rhs = K * abs_op(phi(f_a) @ phi(inst.A))
    return order_result("THM_REVERSE_F", lhs, rhs, tol, hyps, inst, constant=K)


def _nakamoto(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    gamma = require(inst.params.gamma, "gamma")
    hyps = _bounded(inst, condition("gamma_window", 0 <= gamma <= 1, f"γ = {gamma:.6g} in [0, 1]"))
    skip = gate("COR_NAKAMOTO", inst, enforce or _fails(hyps, "bounds_given", "gamma_window"), hyps)
    if skip:
        return skip
    K = k_nakamoto(inst.bounds.h, gamma)
    phi = inst.phi
    lhs = phi(mpower(inst.A, 1 + gamma))
    rhs = K * abs_op(phi(mpower(inst.A, gamma)) @ phi(inst.A))
    return order_result("COR_NAKAMOTO", lhs, rhs, tol, hyps, inst, constant=K)


def _m4(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    alpha, beta = require(inst.params.alpha, "alpha"), require(inst.params.beta, "beta")
    window = 0 <= alpha <= beta and beta > 0
    hyps = _bounded(inst, condition("exponent_order", window, f"0 ≤ α = {alpha:.6g} ≤ β = {beta:.6g}"))
    skip = gate("M4", inst, enforce or _fails(hyps, "bounds_given", "exponent_order"), hyps)
    if skip:
        return skip
    K = k_m4(inst.bounds.h, alpha, beta)
    phi = inst.phi
    lhs = phi(mpower(inst.A, alpha + beta))
    rhs = K * abs_op(phi(mpower(inst.A, alpha)) @ phi(mpower(inst.A, beta)))
    return order_result("M4", lhs, rhs, tol, hyps, inst, constant=K)


def elh_constant(A: np.ndarray, B: np.ndarray, r: float) -> float:
    """‖A‖^r − (‖A‖ − ‖(A − B)^{-1}‖^{-1})^r, the inverse norm being λ_min(A − B)."""
    norm = operator_norm(A)
    gap = min_eig(A - B)
    return norm**r - max(norm - gap, 0.0) ** r


def _strict_gap(inst: Instance) -> HypothesisCheck:
    if inst.B is None:
        return condition("strict_gap", False, "B required")
    gap = min_eig(inst.A - inst.B)
    return condition("strict_gap", gap > 0, f"λ_min(A − B) = {gap:.6g}")


def _elh(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    r = require(inst.params.r, "r")
    hyps = [
        positive_semidefinite("B_positive", inst.B),
        _strict_gap(inst),
        condition("r_window", 0 <= r <= 1, f"r = {r:.6g} in [0, 1]"),
    ]
    skip = gate("ELH", inst, enforce or _fails(hyps, "B_positive"), hyps)
    if skip:
        return skip
    c = elh_constant(inst.A, inst.B, r)
    eye = np.eye(inst.A.shape[0])
    lhs = mpower(inst.B, r) + c * eye
    return order_result("ELH", lhs, mpower(inst.A, r), tol, hyps, inst, constant=c)


def _omega_gap(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    r = require(inst.params.r, "r")
    hyps = [
        positive_invertible("A_positive_invertible", inst.A),
        condition("r_window", 0.5 <= r <= 1, f"r = {r:.6g} in [1/2, 1]"),
    ]
    skip = gate("OMEGA_GAP", inst, True, hyps)
    if skip:
        return skip
    refinement = omega(inst.phi, inst.A, r)
    phi = inst.phi
    eye = np.eye(phi.n_out)
    lhs = phi(mpower(inst.A, r)) + refinement.value * eye
    result = order_result("OMEGA_GAP", lhs, mpower(phi(inst.A), r), tol, hyps, inst, constant=refinement.value)
    result.notes.append(f"λ_min(Φ(A) − Φ(A^r)^(1/r)) = {refinement.infimum:.12g}")
    return result


def asa_constant(A: np.ndarray, m: float, p: float, q: float, r: float) -> float:
    """‖A‖^{(p+r)/q} − ‖A^{1+r} − m‖A^{-1}‖^{-r}·I‖^{(p+r)/(q(1+r))}."""
    eye = np.eye(A.shape[0])
    inverse_norm = operator_norm(mpower(A, -1.0))
    inner = mpower(A, 1 + r) - m * inverse_norm ** (-r) * eye
    return operator_norm(A) ** ((p + r) / q) - operator_norm(inner) ** ((p + r) / (q * (1 + r)))


def _lemma_asa(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    p, q, r = require(inst.params.p, "p"), require(inst.params.q, "q"), require(inst.params.r, "r")
    window = p >= 1 and r >= 0 and q >= 1 and (1 + r) * q >= p + r
    hyps = [
        positive_invertible("A_positive_invertible", inst.A),
        positive_invertible("B_positive_invertible", inst.B),
        _strict_gap(inst),
        condition("exponent_window", window, f"p ≥ 1, r ≥ 0, q ≥ 1, (1+r)q ≥ p+r at ({p:.6g}, {q:.6g}, {r:.6g})"),
    ]
    blocked = _fails(hyps, "A_positive_invertible", "B_positive_invertible") or q <= 0
    skip = gate("LEMMA_ASA", inst, enforce or blocked, hyps)
    if skip:
        return skip
    A, B = inst.A, inst.B
    c = asa_constant(A, min_eig(A - B), p, q, r)
    half = mpower(A, r / 2)
    eye = np.eye(A.shape[0])
    lhs = mpower(half @ mpower(B, p) @ half, 1 / q) + c * eye
    return order_result("LEMMA_ASA", lhs, mpower(A, (p + r) / q), tol, hyps, inst, constant=c)


def refinement_constant(Y: np.ndarray, ratio: float, omega_value: float) -> float:
    """‖Y^{1+s}‖ − ‖Y^{2+s} − ω‖Y^{-s}‖^{-2/s}·I‖^{(1+s)/(2+s)} with s = ratio."""
    eye = np.eye(Y.shape[0])
    shift = omega_value * operator_norm(mpower(Y, -ratio)) ** (-2 / ratio)
    inner = mpower(Y, 2 + ratio) - shift * eye
    return operator_norm(mpower(Y, 1 + ratio)) - operator_norm(inner) ** ((1 + ratio) / (2 + ratio))


def _refined_kadison(
    family: str,
    inst: Instance,
    alpha: float,
    beta: float,
    hyps: List[HypothesisCheck],
    tol: ToleranceConfig,
) -> CheckResult:
    """|Φ(X^β)Φ(X^α)| + c·I ≤ Φ(X^α)^{1+β/α}."""
    phi, X = inst.phi, inst.A
    ratio = beta / alpha
    X_alpha = mpower(X, alpha)
    Y = phi(X_alpha)
    refinement = omega(phi, X_alpha, ratio)
    c = refinement_constant(Y, ratio, refinement.value)
    eye = np.eye(Y.shape[0])
    lhs = abs_op(phi(mpower(X, beta)) @ Y) + c * eye
    result = order_result(family, lhs, mpower(Y, 1 + ratio), tol, hyps, inst, constant=c)
    result.notes.append(f"ω = {refinement.value:.12g}")
    return result


def _main2(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    alpha, beta = require(inst.params.alpha, "alpha"), require(inst.params.beta, "beta")
    window = 0 <= beta < alpha <= 2 * beta
    hyps = [
        positive_invertible("X_positive_invertible", inst.A),
        condition("exponent_window", window, f"β = {beta:.6g} < α = {alpha:.6g} ≤ 2β"),
    ]
    skip = gate("THM_MAIN2", inst, True, hyps)
    if skip:
        return skip
    return _refined_kadison("THM_MAIN2", inst, alpha, beta, hyps, tol)


def _cor_lc(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    gamma = require(inst.params.gamma, "gamma")
    hyps = [
        positive_invertible("X_positive_invertible", inst.A),
        condition("gamma_window", 0.5 <= gamma <= 1, f"γ = {gamma:.6g} in [1/2, 1]"),
    ]
    skip = gate("COR_LC", inst, True, hyps)
    if skip:
        return skip
    return _refined_kadison("COR_LC", inst, 1.0, gamma, hyps, tol)


_CHECKERS: Dict[str, Callable[[Instance, ToleranceConfig, bool], CheckResult]] = {
    "REV_JENSEN": _rev_jensen,
    "REV_CHOI": _rev_choi,
    "THM_REVERSE_F": _thm_reverse_f,
    "COR_NAKAMOTO": _nakamoto,
    "M4": _m4,
    "ELH": _elh,
    "OMEGA_GAP": _omega_gap,
    "LEMMA_ASA": _lemma_asa,
    "THM_MAIN2": _main2,
    "COR_LC": _cor_lc,
}


def check_reverse(
    family: str,
    inst: Instance,
    tol: Optional[ToleranceConfig] = None,
    enforce_hypotheses: bool = True,
) -> CheckResult:
    """
    Evaluate a reverse family.

    Hypotheses without which the constant is undefined (missing bounds,
    ω outside r ∈ [1/2, 1], non-invertible operands) skip the check even
    when enforce_hypotheses is False.
    """
    spec = family_spec(family)
    if spec.kind is not FamilyKind.REVERSE:
        raise ValueError(f"{spec.name} is not a reverse family")
    tol = tol or get_settings().tolerance
    result = _CHECKERS[spec.name](inst, tol, enforce_hypotheses)
    logger.debug(f"{spec.name}: {result.status.value} (gap {result.gap}, constant {result.constant})")
    return result
