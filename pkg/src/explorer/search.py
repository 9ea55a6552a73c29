"""
Randomized hill climbing for instances violating a family's inequality.

The objective is λ_max(lhs − rhs), the negated gap of the check. Each
restart samples a fresh instance from the family gallery, overrides its
exponents from param_ranges and perturbs A (and B) by random Hermitian
steps, halving the step after every rejected move.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import fields, replace
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..config import get_settings
from ..engine.instances import sample_instance
from ..engine.registry import normalize_family
from ..engine.suite import evaluate
from ..errors import ConstraintViolationError, VerifierError
from ..linalg.hermitian import eig_hermitian, hermitian_part, operator_norm
from ..linalg.sampling import random_hermitian, trial_rng
from ..schemas import (
    Certificate,
    CheckStatus,
    ExponentParams,
    Instance,
    SearchBudget,
    SpectralBounds,
    ToleranceConfig,
)

logger = logging.getLogger(__name__)

CLIP_RATIO = 1e-6
MAX_FAILURES = 10
REVALIDATION_TOL = 1e-9
PARAM_NAMES = tuple(f.name for f in fields(ExponentParams))

ParamRanges = Dict[str, Tuple[float, float]]


def parse_param_range(text: str) -> Tuple[str, Tuple[float, float]]:
    """
    Parse "name=lo:hi" (or "name=value" for a fixed value).

    Raises:
        ConstraintViolationError: for unknown names or malformed bounds
    """
    name, sep, bounds = text.partition("=")
    name = name.strip()
    if not sep or name not in PARAM_NAMES:
        raise ConstraintViolationError(f"Expected name=lo:hi with name in {PARAM_NAMES}, got {text!r}")
    lo_text, _, hi_text = bounds.partition(":")
    try:
        lo = float(lo_text)
        hi = float(hi_text) if hi_text else lo
    except ValueError:
        raise ConstraintViolationError(f"Bad range for {name}: {bounds!r}")
    if hi < lo:
        raise ConstraintViolationError(f"Empty range for {name}: {lo} > {hi}")
    return name, (lo, hi)


def with_params(inst: Instance, rng: np.random.Generator, param_ranges: Optional[ParamRanges]) -> Instance:
    if not param_ranges:
        return inst
    unknown = set(param_ranges) - set(PARAM_NAMES)
    if unknown:
        raise ConstraintViolationError(f"Unknown parameters {sorted(unknown)}")
    drawn = {name: float(rng.uniform(lo, hi)) for name, (lo, hi) in sorted(param_ranges.items())}
    return replace(inst, params=replace(inst.params, **drawn))


def project_positive(X: np.ndarray) -> np.ndarray:
    """Clip eigenvalues below CLIP_RATIO·‖X‖."""
    spec = eig_hermitian(X)
    floor = CLIP_RATIO * max(float(np.max(np.abs(spec.eigenvalues))), 1e-300)
    lam = np.clip(spec.eigenvalues, floor, None)
    vectors = spec.eigenvectors
    return hermitian_part((vectors * lam) @ vectors.conj().T)


def _track_bounds(inst: Instance) -> Instance:
    """Widen declared bounds to cover the perturbed spectrum so constants stay valid."""
    if inst.bounds is None:
        return inst
    lam = eig_hermitian(inst.A).eigenvalues
    m = min(inst.bounds.m, float(lam[0]))
    M = max(inst.bounds.M, float(lam[-1]))
    return replace(inst, bounds=SpectralBounds(m, M))


def _perturb(inst: Instance, rng: np.random.Generator, scale: float) -> Instance:
    n = inst.A.shape[0]
    A = project_positive(inst.A + random_hermitian(n, rng, scale * operator_norm(inst.A)))
    B = inst.B
    if B is not None:
        B = project_positive(B + random_hermitian(n, rng, scale * operator_norm(B)))
    return _track_bounds(replace(inst, A=A, B=B))


def violation(
    family: str, inst: Instance, tol: ToleranceConfig, enforce_hypotheses: bool
) -> Tuple[float, bool]:
    """(λ_max(lhs − rhs), exceeds tolerance); skipped or failing evaluations give −inf."""
    try:
        result = evaluate(family, inst, tol, enforce_hypotheses)
    except VerifierError as e:
        logger.debug(f"{family}: evaluation error during search: {e}")
        return -math.inf, False
    if result.status is CheckStatus.SKIPPED or result.gap is None:
        return -math.inf, False
    return -result.gap, result.status is CheckStatus.FAILED


def _restart(
    family: str,
    index: int,
    param_ranges: Optional[ParamRanges],
    budget: SearchBudget,
    n_in: int,
    n_out: Optional[int],
    enforce_hypotheses: bool,
    tol: ToleranceConfig,
) -> Tuple[Optional[Certificate], int]:
    """One restart; returns the certificate (if any) and evaluations used."""
    rng = trial_rng(budget.seed, family, index)
    try:
        inst = with_params(sample_instance(family, n_in, rng, n_out), rng, param_ranges)
    except VerifierError as e:
        logger.debug(f"{family} restart {index}: sampling failed: {e}")
        return None, 1
    best, violated = violation(family, inst, tol, enforce_hypotheses)
    used = 1
    if violated:
        return Certificate(instance=inst, violation_eig=best, family=family), used

    step = budget.step_scale
    failures = 0
    for _ in range(budget.hill_climb_steps):
        candidate = _perturb(inst, rng, step)
        value, violated = violation(family, candidate, tol, enforce_hypotheses)
        used += 1
        if violated:
            return Certificate(instance=candidate, violation_eig=value, family=family), used
        if value > best:
            inst, best = candidate, value
            failures = 0
        else:
            step *= 0.5
            failures += 1
            if failures >= MAX_FAILURES:
                break
    return None, used


def search_violation(
    family: str,
    param_ranges: Optional[ParamRanges] = None,
    budget: Optional[SearchBudget] = None,
    n_in: int = 3,
    n_out: Optional[int] = None,
    enforce_hypotheses: bool = False,
    workers: int = 1,
    tol: Optional[ToleranceConfig] = None,
) -> Optional[Certificate]:
    """
    Search for an instance whose inequality fails beyond tolerance.

    Args:
        family: family id
        param_ranges: name → (lo, hi) overriding the gallery's exponents
        budget: sample cap, hill-climb length, initial step and seed
        n_in: dimension of A
        n_out: output dimension of Φ; drawn per restart when omitted
        enforce_hypotheses: keep hypothesis gating (no certificates expected
            for theorem families)
        workers: concurrent restarts; the lowest-index certificate wins

    Returns:
        first Certificate found, or None when the budget is exhausted
    """
    family = normalize_family(family)
    budget = budget or SearchBudget()
    tol = tol or get_settings().tolerance
    restarts = max(1, budget.max_samples // (budget.hill_climb_steps + 1))
    logger.info(f"Searching {family} (n_in={n_in}, n_out={n_out}) with {restarts} restarts")

    def run(index: int) -> Tuple[Optional[Certificate], int]:
        return _restart(family, index, param_ranges, budget, n_in, n_out, enforce_hypotheses, tol)

    if workers <= 1:
        used = 0
        for index in range(restarts):
            certificate, count = run(index)
            used += count
            if certificate is not None:
                logger.info(
                    f"{family}: violation {certificate.violation_eig:.6g} at restart {index} after {used} samples"
                )
                return certificate
        logger.info(f"{family}: no violation within {used} samples")
        return None

    with ThreadPoolExecutor(max_workers=workers) as pool:
        results: List[Tuple[Optional[Certificate], int]] = list(pool.map(run, range(restarts)))
    for index, (certificate, _) in enumerate(results):
        if certificate is not None:
            logger.info(f"{family}: violation {certificate.violation_eig:.6g} at restart {index}")
            return certificate
    logger.info(f"{family}: no violation within {sum(count for _, count in results)} samples")
    return None


def revalidate(certificate: Certificate, tol: Optional[ToleranceConfig] = None) -> bool:
    """Re-evaluate the stored instance and compare violation_eig within 1e-9."""
    tol = tol or get_settings().tolerance
    value, violated = violation(certificate.family, certificate.instance, tol, enforce_hypotheses=False)
    agrees = violated and abs(value - certificate.violation_eig) <= REVALIDATION_TOL * max(
        1.0, abs(certificate.violation_eig)
    )
    if not agrees:
        logger.warning(
            f"{certificate.family}: certificate does not re-validate "
            f"(stored {certificate.violation_eig:.12g}, recomputed {value:.12g})"
        )
    return agrees
