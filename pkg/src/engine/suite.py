"""
Seeded property suites over the family galleries.

Trial seeds depend only on (seed, family, trial index), so the merged report
is identical for any worker count.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

from ..config import RunConfig
from ..errors import VerifierError
from ..linalg.hermitian import using_eig_solver
from ..linalg.sampling import trial_rng
from ..schemas import (
    CheckMode,
    CheckResult,
    CheckStatus,
    FamilyStats,
    Instance,
    SuiteReport,
    ToleranceConfig,
    TrialPlan,
)
from .direct import check_inequality
from .hypotheses import require
from .instances import instance_to_json, sample_instance
from .isometry import check_with_isometry
from .moment import check_moment_matrix
from .registry import FamilyKind, family_spec
from .reverse import check_reverse

logger = logging.getLogger(__name__)

ERROR_PREFIX = "error: "


def evaluate(
    family: str,
    inst: Instance,
    tol: Optional[ToleranceConfig] = None,
    enforce_hypotheses: bool = True,
    mode: CheckMode = CheckMode.CONSTRUCTIVE,
) -> CheckResult:
    """Dispatch one instance to the checker of its family kind."""
    spec = family_spec(family)
    if spec.kind is FamilyKind.DIRECT:
        return check_inequality(spec.name, inst, tol, enforce_hypotheses)
    if spec.kind is FamilyKind.ISOMETRY:
        return check_with_isometry(spec.name, inst, mode, tol, enforce_hypotheses)
    if spec.kind is FamilyKind.REVERSE:
        return check_reverse(spec.name, inst, tol, enforce_hypotheses)
    return check_moment_matrix(inst.phi, inst.A, int(require(inst.params.r, "r")), tol)


def build_plan(config: RunConfig) -> List[TrialPlan]:
    """Trials cycle through the configured dimensions."""
    return [
        TrialPlan(family=family, index=trial, dim=config.dims[trial % len(config.dims)], seed=config.seed)
        for family in config.families
        for trial in range(config.trials)
    ]


def run_trial(plan: TrialPlan, tol: ToleranceConfig) -> CheckResult:
    """
    Sample and evaluate one trial.

    Engine errors are caught and returned as a skipped result whose note
    starts with "error: ", so one bad trial cannot abort a suite.
    """
    rng = trial_rng(plan.seed, plan.family, plan.index)
    try:
        inst = sample_instance(plan.family, plan.dim, rng)
        return evaluate(plan.family, inst, tol)
    except VerifierError as e:
        logger.warning(f"{plan.family} trial {plan.index} (n={plan.dim}): {e}")
        note = f"{ERROR_PREFIX}{type(e).__name__}: {e}"
        return CheckResult(family=plan.family, status=CheckStatus.SKIPPED, notes=[note])


def execute_plan(plan: List[TrialPlan], tol: ToleranceConfig, workers: int = 1) -> List[CheckResult]:
    """Results come back in plan order for any worker count."""
    if workers <= 1:
        return [run_trial(p, tol) for p in plan]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda p: run_trial(p, tol), plan))


def aggregate(
    plan: List[TrialPlan],
    results: List[CheckResult],
    seed: int,
    tol: ToleranceConfig,
    config_echo: Optional[dict] = None,
) -> SuiteReport:
    stats: dict = {}
    worst_failure: dict = {}
    errors: List[str] = []
    for trial, result in zip(plan, results):
        entry = stats.get(trial.family)
        if entry is None:
            entry = stats[trial.family] = FamilyStats(family=trial.family, theorem=family_spec(trial.family).theorem)
        entry.trials += 1
        if result.status is CheckStatus.PASSED:
            entry.passes += 1
        elif result.status is CheckStatus.FAILED:
            entry.failures += 1
        else:
            entry.skips += 1
            errors += [
                f"{trial.family}#{trial.index}: {note[len(ERROR_PREFIX):]}"
                for note in result.notes
                if note.startswith(ERROR_PREFIX)
            ]
        if result.gap is None:
            continue
        if entry.worst_gap is None or result.gap < entry.worst_gap:
            entry.worst_gap = result.gap
        if result.status is CheckStatus.FAILED:
            current = worst_failure.get(trial.family)
            if current is None or result.gap < current.gap:
                worst_failure[trial.family] = result

    for family, result in worst_failure.items():
        if result.witness is not None:
            stats[family].example_witness = instance_to_json(result.witness)

    return SuiteReport(
        families=list(stats.values()),
        seed=seed,
        tolerance=tol,
        config_echo=config_echo or {},
        errors=errors,
    )


def run_suite(config: RunConfig) -> SuiteReport:
    """
    Run every configured family over seeded random instances.

    Args:
        config: families, dims, trials, seed, tolerance overrides, workers

    Returns:
        SuiteReport with per-family pass/skip/fail counts and worst gaps
    """
    tol = config.tolerance()
    if not config.families:
        logger.info("No families configured; empty suite")
        return SuiteReport(seed=config.seed, tolerance=tol, config_echo=config.echo())

    start_time = time.time()
    plan = build_plan(config)
    workers = config.workers
    logger.info(f"Running {len(plan)} trials over {len(config.families)} families with {workers} worker(s)")
    with using_eig_solver(config.eig_solver):
        results = execute_plan(plan, tol, workers)
    report = aggregate(plan, results, config.seed, tol, config.echo())

    elapsed = time.time() - start_time
    logger.info(
        f"Suite completed in {elapsed:.2f}s: "
        f"{sum(s.failures for s in report.families)} failures, {report.theorem_failures} on theorem families"
    )
    return report
