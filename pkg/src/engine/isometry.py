"""
Partial-isometry inequalities.

Constructive mode rebuilds the isometry from the polar decomposition of the
product the argument runs through and verifies every link of the chain;
dominance mode compares sorted eigenvalues, which is equivalent to the
existence of some unitary conjugator.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..config import get_settings
from ..constants.kantorovich import factor_variant, k_three, kappa, power_factor
from ..errors import SingularOperandError
from ..functions.expressions import (
    POSITIVE,
    Compose,
    DeriveKind,
    Power,
    Product,
    ScalarFn,
    constant_fn,
    derive,
)
from ..linalg.hermitian import (
    abs_op,
    apply_scalar_function,
    conjugator_for_adjoint,
    hermitian_part,
    is_positive_definite,
    loewner_leq,
    mpower,
    operator_norm,
    polar,
    spectral_dominance,
)
from ..schemas import (
    CheckMode,
    CheckResult,
    CheckStatus,
    ConvexityProperty,
    HypothesisCheck,
    Instance,
    OrderVerdict,
    ToleranceConfig,
)
from .direct import spectrum_in_domain
from .hypotheses import (
    condition,
    gate,
    operator_property,
    positive_invertible,
    require,
    within_bounds,
)
from .registry import FamilyKind, family_spec

logger = logging.getLogger(__name__)

CONVEX = ConvexityProperty.OPERATOR_CONVEX
CONCAVE = ConvexityProperty.OPERATOR_CONCAVE


@dataclass(frozen=True)
class ConjugationChain:
    """
    |Φ(f)^s Φ(A)^a Φ(g)^s| against Φ(h(A)) with h = f^s·t^a·g^s.

    Links: replace Φ(f)^{2s} by f(Φ(A))^{2s}; swap |T| for |T*| through the
    polar isometry W of T = f(Φ(A))^s Φ(A)^a Φ(g)^s; replace Φ(g)^{2s} by
    g(Φ(A))^{2s}; finish with Choi–Davis for h. The reversed chain flips
    every order link.
    """
    family: str
    reverse: bool

    def exponents(self, inst: Instance) -> Tuple[float, float]:
        if self.family.startswith("PO1"):
            r = require(inst.params.r, "r")
            return -r, r
        if self.family == "TT1M1":
            return 1.0, 1.0
        return -1.0, 1.0


CHAINS = {
    "PO1": ConjugationChain("PO1", reverse=False),
    "PO1_REVERSE": ConjugationChain("PO1_REVERSE", reverse=True),
    "TT1M1": ConjugationChain("TT1M1", reverse=False),
    "TT1M2": ConjugationChain("TT1M2", reverse=True),
}

CHAIN_LABELS = ["Φ(f) → f(Φ(A))", "|T| = W*|T*|W", "Φ(g) → g(Φ(A))", "h(Φ(A)) vs Φ(h(A))"]


def chain_function(f: ScalarFn, g: ScalarFn, s: float, a: float) -> ScalarFn:
    """h(t) = f(t)^s · t^a · g(t)^s on (0, ∞)."""
    expr = Product(Product(Compose(Power(s), f.expr), Power(a)), Compose(Power(s), g.expr))
    return ScalarFn(expr, f.domain.intersect(g.domain).intersect(POSITIVE))


def _chain_hypotheses(chain: ConjugationChain, inst: Instance, g: ScalarFn) -> List[HypothesisCheck]:
    f = inst.f
    hyps = [
        positive_invertible("A_positive_invertible", inst.A),
        spectrum_in_domain("f_domain", inst.A, f),
        spectrum_in_domain("g_domain", inst.A, g),
    ]
    if f is None:
        return hyps
    family = chain.family
    if family.startswith("PO1"):
        r = require(inst.params.r, "r")
        hyps.append(condition("r_window", 0 <= r <= 0.5, f"r = {r:.6g} in [0, 1/2]"))
    if family == "PO1":
        hyps += [
            operator_property("f_operator_convex", f, CONVEX),
            operator_property("g_operator_convex", g, CONVEX),
            operator_property("fg_over_t_operator_concave", derive(f, DeriveKind.FG_OVER_T, g), CONCAVE),
        ]
    elif family == "PO1_REVERSE":
        hyps += [
            operator_property("f_operator_concave", f, CONCAVE),
            operator_property("g_operator_concave", g, CONCAVE),
            operator_property("t_over_fg_operator_concave", derive(f, DeriveKind.T_OVER_FG, g), CONCAVE),
        ]
    else:
        hyps += [
            operator_property("f_squared_operator_concave", derive(f, DeriveKind.F_SQUARED), CONCAVE),
            operator_property("g_squared_operator_concave", derive(g, DeriveKind.F_SQUARED), CONCAVE),
        ]
        if family == "TT1M1":
            hyps.append(operator_property("tfg_operator_convex", chain_function(f, g, 1.0, 1.0), CONVEX))
        else:
            hyps.append(operator_property("t_over_fg_operator_concave", derive(f, DeriveKind.T_OVER_FG, g), CONCAVE))
    return hyps


def _ordered(lo: np.ndarray, hi: np.ndarray, reverse: bool, tol: ToleranceConfig) -> OrderVerdict:
    return loewner_leq(hi, lo, tol) if reverse else loewner_leq(lo, hi, tol)


def _conjugation_residual(target: np.ndarray, conjugated: np.ndarray, tol: ToleranceConfig) -> OrderVerdict:
    """Equality link as a verdict: gap = −‖target − conjugated‖."""
    residual = operator_norm(target - conjugated)
    bound = tol.bound(max(operator_norm(target), operator_norm(conjugated)))
    return OrderVerdict(holds=residual <= bound, gap_min_eig=-residual, tolerance_used=bound)


def _result(
    family: str,
    lhs: np.ndarray,
    rhs: np.ndarray,
    verdict: OrderVerdict,
    hyps: List[HypothesisCheck],
    inst: Instance,
    **extra,
) -> CheckResult:
    return CheckResult(
        family=family,
        status=CheckStatus.PASSED if verdict.holds else CheckStatus.FAILED,
        lhs=lhs,
        rhs=rhs,
        verdict=verdict,
        hypotheses=hyps,
        witness=inst,
        **extra,
    )


def _check_chain(
    chain: ConjugationChain,
    inst: Instance,
    mode: CheckMode,
    tol: ToleranceConfig,
    enforce: bool,
) -> CheckResult:
    g = inst.g if inst.g is not None else constant_fn(1.0)
    hyps = _chain_hypotheses(chain, inst, g)
    skip = gate(chain.family, inst, enforce or inst.f is None, hyps)
    if skip:
        return skip

    s, a = chain.exponents(inst)
    phi, A, f = inst.phi, inst.A, inst.f
    h = chain_function(f, g, s, a)
    phi_a = phi(A)
    phi_f = phi(apply_scalar_function(A, f))
    phi_g = phi(apply_scalar_function(A, g))
    middle = mpower(phi_a, a) @ mpower(phi_g, s)
    modulus = abs_op(mpower(phi_f, s) @ middle)
    target = phi(apply_scalar_function(A, h))

    if mode is CheckMode.DOMINANCE:
        if chain.reverse:
            verdict = spectral_dominance(target, modulus, tol)
            return _result(chain.family, target, modulus, verdict, hyps, inst)
        verdict = spectral_dominance(modulus, target, tol)
        return _result(chain.family, modulus, target, verdict, hyps, inst)

    T = mpower(apply_scalar_function(phi_a, f), s) @ middle
    parts = conjugator_for_adjoint(T)
    W = parts.isometry
    abs_t, abs_t_star = abs_op(T), abs_op(T.conj().T)
    h_phi = apply_scalar_function(phi_a, h)
    links = [
        _ordered(modulus, abs_t, chain.reverse, tol),
        _conjugation_residual(abs_t, W.conj().T @ abs_t_star @ W, tol),
        _ordered(abs_t_star, h_phi, chain.reverse, tol),
        _ordered(h_phi, target, chain.reverse, tol),
    ]
    conjugated = W.conj().T @ target @ W
    lhs, rhs = (conjugated, modulus) if chain.reverse else (modulus, conjugated)
    return _finish(chain.family, lhs, rhs, links, CHAIN_LABELS, tol, hyps, inst, parts)


def _finish(family, lhs, rhs, links, labels, tol, hyps, inst, parts, constant=None) -> CheckResult:
    """End-to-end verdict within the tolerance accumulated over the links."""
    lhs, rhs = hermitian_part(lhs), hermitian_part(rhs)
    verdict = loewner_leq(lhs, rhs, tol.scaled(len(links)))
    result = _result(
        family, lhs, rhs, verdict, hyps, inst,
        constant=constant,
        isometry=parts,
        chain_gaps=[link.gap_min_eig for link in links],
        chain_labels=list(labels),
    )
    failed = [label for label, link in zip(labels, links) if not link.holds]
    if failed:
        result.notes.append(f"chain links outside tolerance: {', '.join(failed)}")
    return result


def _me1_hypotheses(inst: Instance) -> List[HypothesisCheck]:
    alpha = require(inst.params.alpha, "alpha")
    beta = require(inst.params.beta, "beta")
    gamma = require(inst.params.gamma, "gamma")
    lo, hi = min(alpha, beta), max(alpha, beta)
    window = lo >= 0 and gamma > 0 and lo <= gamma / 2 and hi <= gamma
    return [
        condition("exponent_window", window, f"min ≤ γ/2 and max ≤ γ for ({alpha:.6g}, {beta:.6g}, {gamma:.6g})"),
        positive_invertible("A_positive_invertible", inst.A),
        within_bounds(inst),
    ]


ME1_LABELS = [
    "|S| ≤ c₁|core|",
    "|S*| ≥ c·Φ(A^γ)^{1+(α+β)/γ}",
    "|S*| ≥ c₂·Φ(A^{α+β+γ})",
    "W|S|W* = |S*|",
]


def _check_me1(inst: Instance, mode: CheckMode, tol: ToleranceConfig, enforce: bool) -> CheckResult:
    """
    Φ(A^{α+β+γ}) ≤ K·W|Φ(A^lo)Φ(A^γ)Φ(A^hi)|W*, lo = min(α, β), hi = max(α, β).

    W is the polar isometry of S = Φ(A^γ)^{1+lo/γ}Φ(A^hi).
    """
    hyps = _me1_hypotheses(inst)
    skip = gate("ME1", inst, enforce or inst.bounds is None, hyps)
    if skip:
        return skip

    alpha, beta, gamma = inst.params.alpha, inst.params.beta, inst.params.gamma
    lo, hi = min(alpha, beta), max(alpha, beta)
    a, b = hi / gamma, lo / gamma
    h = inst.bounds.h
    variant = factor_variant(hi, gamma)
    K = k_three(h, alpha, beta, gamma, variant)

    phi, A = inst.phi, inst.A
    phi_b = phi(mpower(A, gamma))
    phi_hi = phi(mpower(A, hi))
    core = abs_op(phi(mpower(A, lo)) @ phi_b @ phi_hi)
    target = phi(mpower(A, alpha + beta + gamma))

    if mode is CheckMode.DOMINANCE:
        verdict = spectral_dominance(target, K * core, tol)
        result = _result("ME1", target, K * core, verdict, hyps, inst, constant=K)
        result.notes.append(f"{variant} factor")
        return result

    S = mpower(phi_b, 1 + b) @ phi_hi
    parts = polar(S)
    W = parts.isometry
    abs_s, abs_s_star = abs_op(S), abs_op(S.conj().T)
    c1 = math.sqrt(kappa(h**lo, 2.0)) / math.sqrt(kappa(h**gamma, 2 * b))
    c_e1 = math.sqrt(power_factor(h, hi, gamma, variant)) / math.sqrt(kappa(h**hi, 2.0))
    c2 = c_e1 / kappa(h**gamma, 1 + a + b)
    links = [
        loewner_leq(abs_s, c1 * core, tol),
        loewner_leq(c_e1 * mpower(phi_b, 1 + a + b), abs_s_star, tol),
        loewner_leq(c2 * target, abs_s_star, tol),
        _conjugation_residual(abs_s_star, W @ abs_s @ W.conj().T, tol),
    ]
    rhs = K * (W @ core @ W.conj().T)
    result = _finish("ME1", target, rhs, links, ME1_LABELS, tol, hyps, inst, parts, constant=K)
    result.notes.append(f"{variant} factor")
    return result


def check_with_isometry(
    family: str,
    inst: Instance,
    mode: CheckMode = CheckMode.CONSTRUCTIVE,
    tol: Optional[ToleranceConfig] = None,
    enforce_hypotheses: bool = True,
) -> CheckResult:
    """
    Evaluate PO1, PO1_REVERSE, TT1M1, TT1M2 or ME1.

    Raises:
        SingularOperandError: dominance mode on a singular A
    """
    spec = family_spec(family)
    if spec.kind is not FamilyKind.ISOMETRY:
        raise ValueError(f"{spec.name} is not a partial-isometry family")
    mode = CheckMode(mode)
    tol = tol or get_settings().tolerance
    if mode is CheckMode.DOMINANCE and not is_positive_definite(inst.A):
        raise SingularOperandError(f"{spec.name}: dominance mode needs an invertible A")

    if spec.name == "ME1":
        result = _check_me1(inst, mode, tol, enforce_hypotheses)
    else:
        result = _check_chain(CHAINS[spec.name], inst, mode, tol, enforce_hypotheses)

    if mode is CheckMode.CONSTRUCTIVE and result.status is CheckStatus.FAILED and is_positive_definite(inst.A):
        dominance = check_with_isometry(spec.name, inst, CheckMode.DOMINANCE, tol, enforce_hypotheses)
        if dominance.passed:
            result.notes.append("constructed isometry fails while spectral dominance holds")
            logger.warning(f"{spec.name}: constructive verdict fails but dominance holds")
    logger.debug(f"{spec.name} [{mode.value}]: {result.status.value} (gap {result.gap})")
    return result
