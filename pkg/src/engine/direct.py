"""
Direct Löwner checks: both sides are assembled from Φ, A (and B) and compared
without any constant or partial isometry.
"""

import logging
from typing import Callable, Dict, List, Optional

import numpy as np

from ..config import get_settings
from ..functions.expressions import DeriveKind, ScalarFn, derive
from ..linalg.hermitian import (
    abs_op,
    apply_scalar_function,
    eig_hermitian,
    eigvals_hermitian,
    hermitian_part,
    inv_positive,
    loewner_leq,
    mpower,
    sqrt_positive,
    spectral_dominance,
)
from ..schemas import (
    CheckResult,
    CheckStatus,
    ConvexityProperty,
    HypothesisCheck,
    Instance,
    ToleranceConfig,
)
from .hypotheses import (
    HOLDS,
    condition,
    gate,
    operator_property,
    order_result,
    positive_invertible,
    positive_semidefinite,
    require,
    worst_of,
)
from .registry import FamilyKind, family_spec

logger = logging.getLogger(__name__)

CONVEX = ConvexityProperty.OPERATOR_CONVEX
CONCAVE = ConvexityProperty.OPERATOR_CONCAVE
COMMUTE_TOL = 1e-9


def spectrum_in_domain(name: str, A: np.ndarray, f: Optional[ScalarFn]) -> HypothesisCheck:
    if f is None:
        return condition(name, False, "function missing")
    lam = eigvals_hermitian(A)
    slack = 1e-9 * max(1.0, float(np.max(np.abs(lam))))
    ok = f.domain.clamp(lam, slack) is not None
    return condition(name, ok, f"spectrum [{lam[0]:.6g}, {lam[-1]:.6g}] vs domain {f.domain}")


def _f_positive(inst: Instance) -> List[HypothesisCheck]:
    hyps = [positive_invertible("A_positive_invertible", inst.A), spectrum_in_domain("spectrum_in_domain", inst.A, inst.f)]
    if hyps[-1].state is HOLDS:
        values = eigvals_hermitian(apply_scalar_function(inst.A, inst.f))
        hyps.append(condition("f_positive", values[0] > 0, f"min f = {values[0]:.3e}"))
    return hyps


def _chda(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    hyps = [spectrum_in_domain("spectrum_in_domain", inst.A, inst.f)]
    if inst.f is not None:
        hyps.append(operator_property("f_operator_convex", inst.f, CONVEX))
    skip = gate("CHDA", inst, enforce or inst.f is None, hyps)
    if skip:
        return skip
    phi = inst.phi
    lhs = apply_scalar_function(phi(inst.A), inst.f)
    rhs = phi(apply_scalar_function(inst.A, inst.f))
    return order_result("CHDA", lhs, rhs, tol, hyps, inst)


def _power_cd(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    p = require(inst.params.p, "p")
    hyps = [condition("exponent_window", -1 <= p <= 2, f"p = {p:.6g} in [-1, 2]")]
    if p < 0:
        hyps.append(positive_invertible("A_positive_invertible", inst.A))
    else:
        hyps.append(positive_semidefinite("A_positive", inst.A))
    skip = gate("POWER_CD", inst, enforce, hyps)
    if skip:
        return skip
    phi = inst.phi
    outer = mpower(phi(inst.A), p)
    inner = phi(mpower(inst.A, p))
    result_args = (inner, outer) if 0 <= p <= 1 else (outer, inner)
    result = order_result("POWER_CD", *result_args, tol, hyps, inst)
    if 0 <= p <= 1:
        result.notes.append("concave window: Φ(A^p) ≤ Φ(A)^p")
    return result


def _kadison(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    hyps = [condition("A_hermitian", True)]
    phi_a = inst.phi(inst.A)
    return order_result("KADISON", phi_a @ phi_a, inst.phi(inst.A @ inst.A), tol, hyps, inst)


def _asy(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    gamma = require(inst.params.gamma, "gamma")
    hyps = [
        condition("gamma_window", 0 <= gamma <= 1, f"γ = {gamma:.6g} in [0, 1]"),
        positive_semidefinite("X_positive", inst.A),
    ]
    skip = gate("ASY", inst, enforce, hyps)
    if skip:
        return skip
    phi_x = inst.phi(inst.A)
    lhs = abs_op(inst.phi(mpower(inst.A, gamma)) @ phi_x)
    return order_result("ASY", lhs, mpower(phi_x, 1 + gamma), tol, hyps, inst)


def _asy2(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    alpha, beta = require(inst.params.alpha, "alpha"), require(inst.params.beta, "beta")
    hyps = [
        condition("exponent_order", 0 <= alpha <= beta, f"0 ≤ α = {alpha:.6g} ≤ β = {beta:.6g}"),
        positive_semidefinite("X_positive", inst.A),
    ]
    skip = gate("ASY2", inst, enforce, hyps)
    if skip:
        return skip
    phi = inst.phi
    lhs = abs_op(phi(mpower(inst.A, alpha)) @ phi(mpower(inst.A, beta)))
    return order_result("ASY2", lhs, phi(mpower(inst.A, alpha + beta)), tol, hyps, inst)


def _furuta_hypotheses(inst: Instance, invertible: bool) -> List[HypothesisCheck]:
    alpha = require(inst.params.alpha, "alpha")
    beta = require(inst.params.beta, "beta")
    gamma = require(inst.params.gamma, "gamma")
    total = alpha + beta
    window = total > 0 and beta / total <= gamma <= 2 * beta / total
    hyps = [
        condition("exponent_order", 0 <= alpha <= beta, f"0 ≤ α = {alpha:.6g} ≤ β = {beta:.6g}"),
        condition("gamma_window", window, f"γ = {gamma:.6g} in [β/(α+β), 2β/(α+β)]"),
    ]
    if invertible:
        hyps.append(positive_invertible("X_positive_invertible", inst.A))
    else:
        hyps.append(positive_semidefinite("X_positive", inst.A))
    return hyps


def _asy222(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    hyps = _furuta_hypotheses(inst, invertible=False)
    skip = gate("ASY222", inst, enforce, hyps)
    if skip:
        return skip
    a, b, c = inst.params.alpha, inst.params.beta, inst.params.gamma
    phi = inst.phi
    lhs = abs_op(mpower(phi(mpower(inst.A, a)), c) @ mpower(phi(mpower(inst.A, b)), c))
    return order_result("ASY222", lhs, phi(mpower(inst.A, (a + b) * c)), tol, hyps, inst)


def _asy33(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    hyps = _furuta_hypotheses(inst, invertible=True)
    skip = gate("ASY33", inst, enforce, hyps)
    if skip:
        return skip
    a, b, c = inst.params.alpha, inst.params.beta, inst.params.gamma
    phi = inst.phi
    lhs = abs_op(mpower(phi(mpower(inst.A, -a)), -c) @ mpower(phi(mpower(inst.A, b)), c))
    return order_result("ASY33", lhs, phi(mpower(inst.A, (a + b) * c)), tol, hyps, inst)


def perspective(f: ScalarFn, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}."""
    root = sqrt_positive(A)
    inv_root = mpower(A, -0.5)
    return root @ apply_scalar_function(hermitian_part(inv_root @ B @ inv_root), f) @ root


def _perspective(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    hyps = [
        positive_invertible("A_positive_invertible", inst.A),
        positive_invertible("B_positive_invertible", inst.B),
    ]
    if inst.f is not None:
        hyps.append(operator_property("f_operator_convex", inst.f, CONVEX))
    skip = gate("PERSPECTIVE", inst, enforce or inst.B is None, hyps)
    if skip:
        return skip
    phi = inst.phi
    phi_a, phi_b = phi(inst.A), phi(inst.B)
    if inst.f is None:
        lhs = phi_a @ inv_positive(phi_b) @ phi_a
        rhs = phi(inst.A @ inv_positive(inst.B) @ inst.A)
    else:
        lhs = perspective(inst.f, phi_a, phi_b)
        rhs = phi(perspective(inst.f, inst.A, inst.B))
    return order_result("PERSPECTIVE", lhs, rhs, tol, hyps, inst)


def _f_squared_concave(inst: Instance) -> List[HypothesisCheck]:
    hyps = _f_positive(inst)
    if inst.f is not None:
        hyps.append(operator_property("f_squared_operator_concave", derive(inst.f, DeriveKind.F_SQUARED), CONCAVE))
    return hyps


def _f_parts(inst: Instance):
    phi = inst.phi
    f_a = apply_scalar_function(inst.A, inst.f)
    return phi, phi(f_a), phi(inst.A), f_a


def _cor_f2_upper(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    hyps = _f_squared_concave(inst)
    skip = gate("COR_F2_UPPER", inst, enforce or inst.f is None, hyps)
    if skip:
        return skip
    phi, phi_f, phi_a, f_a = _f_parts(inst)
    return order_result("COR_F2_UPPER", abs_op(phi_f @ phi_a), phi(inst.A @ f_a), tol, hyps, inst)


def _cor_f2_lower(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    hyps = _f_squared_concave(inst)
    skip = gate("COR_F2_LOWER", inst, enforce or inst.f is None, hyps)
    if skip:
        return skip
    phi, phi_f, phi_a, f_a = _f_parts(inst)
    lhs = phi(inst.A @ inv_positive(f_a))
    return order_result("COR_F2_LOWER", lhs, abs_op(inv_positive(phi_f) @ phi_a), tol, hyps, inst)


def _cor_f2_sandwich(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    hyps = _f_squared_concave(inst)
    if inst.f is not None and hyps[1].state is HOLDS:
        values = eigvals_hermitian(apply_scalar_function(inst.A, inst.f))
        hyps.append(condition("f_at_least_one", values[0] >= 1 - 1e-12, f"min f = {values[0]:.6g}"))
    skip = gate("COR_F2_SANDWICH", inst, enforce or inst.f is None, hyps)
    if skip:
        return skip
    phi, phi_f, phi_a, f_a = _f_parts(inst)
    chain = [
        phi(inst.A @ inv_positive(f_a)),
        abs_op(inv_positive(phi_f) @ phi_a),
        abs_op(phi_f @ phi_a),
        phi(inst.A @ f_a),
    ]
    verdicts = [loewner_leq(lo, hi, tol) for lo, hi in zip(chain, chain[1:])]
    return _chain_result("COR_F2_SANDWICH", chain[0], chain[-1], verdicts, hyps, inst,
                         ["Φ(Af⁻¹) ≤ |Φ(f)⁻¹Φ(A)|", "|Φ(f)⁻¹Φ(A)| ≤ |Φ(f)Φ(A)|", "|Φ(f)Φ(A)| ≤ Φ(Af)"])


def _chain_result(family, lhs, rhs, verdicts, hyps, inst, labels) -> CheckResult:
    verdict = worst_of(verdicts)
    return CheckResult(
        family=family,
        status=CheckStatus.PASSED if verdict.holds else CheckStatus.FAILED,
        lhs=lhs,
        rhs=rhs,
        verdict=verdict,
        chain_gaps=[v.gap_min_eig for v in verdicts],
        chain_labels=labels,
        hypotheses=hyps,
        witness=inst,
    )


def _cor_gamma(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    gamma = require(inst.params.gamma, "gamma")
    hyps = [
        condition("gamma_window", 0 <= gamma <= 0.5, f"γ = {gamma:.6g} in [0, 1/2]"),
        positive_invertible("A_positive_invertible", inst.A),
    ]
    skip = gate("COR_GAMMA", inst, enforce, hyps)
    if skip:
        return skip
    phi = inst.phi
    phi_g, phi_a = phi(mpower(inst.A, gamma)), phi(inst.A)
    upper_lhs, upper_rhs = abs_op(phi_g @ phi_a), phi(mpower(inst.A, 1 + gamma))
    lower_lhs, lower_rhs = phi(mpower(inst.A, 1 - gamma)), abs_op(inv_positive(phi_g) @ phi_a)
    verdicts = [loewner_leq(upper_lhs, upper_rhs, tol), loewner_leq(lower_lhs, lower_rhs, tol)]
    return _chain_result("COR_GAMMA", upper_lhs, upper_rhs, verdicts, hyps, inst,
                         ["|Φ(A^γ)Φ(A)| ≤ Φ(A^{1+γ})", "Φ(A^{1-γ}) ≤ |Φ(A^γ)⁻¹Φ(A)|"])


def _prop_fr(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    r = require(inst.params.r, "r")
    hyps = _f_squared_concave(inst)
    hyps.append(condition("r_window", 0 <= r <= 0.5, f"r = {r:.6g} in [0, 1/2]"))
    skip = gate("PROP_FR", inst, enforce or inst.f is None, hyps)
    if skip:
        return skip
    phi, _, phi_a, f_a = _f_parts(inst)
    lhs = abs_op(mpower(phi(inv_positive(f_a)), -r) @ mpower(phi_a, r))
    return order_result("PROP_FR", lhs, mpower(phi(inst.A @ f_a), r), tol, hyps, inst)


def comonotone(A: np.ndarray, B: np.ndarray) -> HypothesisCheck:
    """A = h1(C), B = h2(C) with h1, h2 nonnegative and nondecreasing."""
    if B is None:
        return condition("comonotone_pair", False, "B missing")
    spec = eig_hermitian(A + B)
    u = spec.eigenvectors
    a_rot, b_rot = u.conj().T @ A @ u, u.conj().T @ B @ u
    scale = max(1.0, float(np.max(np.abs(spec.eigenvalues))))
    off = max(np.linalg.norm(a_rot - np.diag(np.diag(a_rot))), np.linalg.norm(b_rot - np.diag(np.diag(b_rot))))
    a, b = np.diag(a_rot).real, np.diag(b_rot).real
    slack = COMMUTE_TOL * scale
    ok = (
        off <= slack
        and a.min() >= -slack
        and b.min() >= -slack
        and np.all(np.diff(a) >= -slack)
        and np.all(np.diff(b) >= -slack)
    )
    return condition("comonotone_pair", bool(ok), f"off-diagonal {off:.3e}")


def _br_dominance(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    hyps = [comonotone(inst.A, inst.B)]
    skip = gate("BR_UNITARY_DOMINANCE", inst, enforce or inst.B is None, hyps)
    if skip:
        return skip
    phi = inst.phi
    phi_a = phi(inst.A)
    lhs = phi_a @ phi(inst.B) @ phi_a
    rhs = phi(inst.A @ inst.B @ inst.A)
    return order_result("BR_UNITARY_DOMINANCE", lhs, rhs, tol, hyps, inst, decide=spectral_dominance)


def _ordering(x: np.ndarray) -> int:
    """1 nondecreasing, -1 nonincreasing, 0 otherwise (constant counts as both)."""
    d = np.diff(x)
    if np.all(d >= 0):
        return 1
    if np.all(d <= 0):
        return -1
    return 0


def _chebyshev(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    """Diagonals of A and B as the two sequences."""
    if inst.B is None:
        return gate("SCALAR_CHEBYSHEV", inst, True, [condition("B_present", False, "B missing")])
    a, b = np.diag(inst.A).real, np.diag(inst.B).real
    oa, ob = _ordering(a), _ordering(b)
    hyps = [
        condition("monotone_sequences", oa != 0 and ob != 0, f"orderings ({oa}, {ob})"),
        condition("positive_sequences", a.min() > 0 and b.min() > 0),
    ]
    skip = gate("SCALAR_CHEBYSHEV", inst, enforce, hyps)
    if skip:
        return skip
    product = np.array([[np.mean(a) * np.mean(b)]])
    joint = np.array([[np.mean(a * b)]])
    reverse = oa * ob < 0
    if reverse:
        result = order_result("SCALAR_CHEBYSHEV", joint, product, tol, hyps, inst)
        result.notes.append("oppositely ordered: reversed inequality mean(ab) ≤ mean(a)·mean(b)")
    else:
        result = order_result("SCALAR_CHEBYSHEV", product, joint, tol, hyps, inst)
    return result


def _ch_op1(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    hyps = [positive_semidefinite("A_positive", inst.A), positive_semidefinite("B_positive", inst.B)]
    skip = gate("CH_OP1", inst, enforce or inst.B is None, hyps)
    if skip:
        return skip
    phi = inst.phi
    root = sqrt_positive(inst.A)
    lhs = abs_op(phi(inst.B) @ phi(inst.A))
    return order_result("CH_OP1", lhs, phi(root @ inst.B @ root), tol, hyps, inst)


def _ch_op2(inst: Instance, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    hyps = [positive_semidefinite("A_positive", inst.A), positive_semidefinite("B_positive", inst.B)]
    skip = gate("CH_OP2", inst, enforce or inst.B is None, hyps)
    if skip:
        return skip
    phi = inst.phi
    phi_a = phi(inst.A)
    lhs = phi_a @ phi(inst.B) @ phi_a
    return order_result("CH_OP2", lhs, phi(inst.A @ inst.B @ inst.A), tol, hyps, inst)


_CHECKERS: Dict[str, Callable[[Instance, ToleranceConfig, bool], CheckResult]] = {
    "CHDA": _chda,
    "POWER_CD": _power_cd,
    "KADISON": _kadison,
    "ASY": _asy,
    "ASY2": _asy2,
    "ASY222": _asy222,
    "ASY33": _asy33,
    "PERSPECTIVE": _perspective,
    "COR_F2_UPPER": _cor_f2_upper,
    "COR_F2_LOWER": _cor_f2_lower,
    "COR_F2_SANDWICH": _cor_f2_sandwich,
    "COR_GAMMA": _cor_gamma,
    "PROP_FR": _prop_fr,
    "BR_UNITARY_DOMINANCE": _br_dominance,
    "SCALAR_CHEBYSHEV": _chebyshev,
    "CH_OP1": _ch_op1,
    "CH_OP2": _ch_op2,
}


def check_inequality(
    family: str,
    inst: Instance,
    tol: Optional[ToleranceConfig] = None,
    enforce_hypotheses: bool = True,
) -> CheckResult:
    """
    Evaluate a direct family on one instance.

    Args:
        family: direct family id
        inst: instance carrying Φ, A and the family's extra data
        tol: order tolerance; the environment default when omitted
        enforce_hypotheses: when False the raw inequality is evaluated even if
            a hypothesis fails (explorer path); missing operands still skip

    Raises:
        DimensionMismatchError, DomainViolationError, SingularOperandError
    """
    spec = family_spec(family)
    if spec.kind is not FamilyKind.DIRECT:
        raise ValueError(f"{spec.name} is not a direct family")
    tol = tol or get_settings().tolerance
    result = _CHECKERS[spec.name](inst, tol, enforce_hypotheses)
    if result.status is not CheckStatus.SKIPPED and not spec.theorem:
        result.notes.append("conjecture family; failures do not contradict a theorem")
    logger.debug(f"{spec.name}: {result.status.value} (gap {result.gap})")
    return result
