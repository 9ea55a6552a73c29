"""
LangGraph pipeline behind the verify command.

prepare_suite → execute_checks → explore_findings → generate_report
"""

import logging
import time
from typing import Any, Dict, List

from langgraph.graph import END, StateGraph

from ..config import RunConfig, log_environment_config
from ..engine.suite import aggregate, build_plan, execute_plan
from ..explorer.search import revalidate, search_violation
from ..linalg.hermitian import using_eig_solver
from ..reporting.report import certificate_dict, render, suite_report_dict
from ..schemas import Certificate, CheckStatus, SearchBudget, SuiteState

logger = logging.getLogger(__name__)

EXPLORE_BUDGET = SearchBudget(max_samples=600, hill_climb_steps=30)


def _failed(state: SuiteState, node: str, start_time: float, e: Exception) -> Dict[str, Any]:
    execution_time = time.time() - start_time
    error_msg = f"{node} failed after {execution_time:.2f}s: {e}"
    logger.error(error_msg)
    return {"errors": state.errors + [error_msg]}


def prepare_suite(state: SuiteState) -> Dict[str, Any]:
    """
    Validate the run config and lay out the trial plan.

    Args:
        state: pipeline state carrying the config dump

    Returns:
        state update with the plan
    """
    start_time = time.time()
    logger.info("Starting prepare_suite node")
    try:
        config = RunConfig(**state.config)
        plan = build_plan(config)
        if not plan:
            logger.warning("Empty suite: no families configured")
        logger.info(f"prepare_suite completed in {time.time() - start_time:.2f}s: {len(plan)} trials")
        return {"plan": plan}
    except Exception as e:
        return _failed(state, "prepare_suite", start_time, e)


def execute_checks(state: SuiteState) -> Dict[str, Any]:
    """Run the planned trials and aggregate them into a SuiteReport."""
    start_time = time.time()
    logger.info("Starting execute_checks node")
    try:
        config = RunConfig(**state.config)
        tol = config.tolerance()
        with using_eig_solver(config.eig_solver):
            results = execute_plan(state.plan, tol, config.workers)
        report = aggregate(state.plan, results, config.seed, tol, config.echo())
        logger.info(f"execute_checks completed in {time.time() - start_time:.2f}s")
        for stats in report.families:
            logger.info(
                f"   {stats.family}: {stats.passes} passed, {stats.skips} skipped, {stats.failures} failed"
            )
        return {"results": results, "report": report}
    except Exception as e:
        return _failed(state, "execute_checks", start_time, e)


def _worst_failures(state: SuiteState) -> Dict[str, Certificate]:
    worst: Dict[str, Certificate] = {}
    for result in state.results:
        if result.status is not CheckStatus.FAILED or result.witness is None:
            continue
        current = worst.get(result.family)
        if current is None or -result.gap > current.violation_eig:
            worst[result.family] = Certificate(
                instance=result.witness, violation_eig=-result.gap, family=result.family
            )
    return worst


def explore_findings(state: SuiteState) -> Dict[str, Any]:
    """
    Attach a re-validated certificate to every failing family.

    The worst failing trial is re-validated first; when it does not
    reproduce, the explorer searches the family with hypotheses enforced.
    """
    start_time = time.time()
    logger.info("Starting explore_findings node")
    if state.report is None:
        logger.warning("No report available for exploration")
        return {"errors": state.errors + ["Prerequisites missing: suite report required"]}
    try:
        config = RunConfig(**state.config)
        if not config.explore_failures:
            return {"report": state.report}
        tol = config.tolerance()
        dims = {p.family: p.dim for p in state.plan}
        entries: List[Dict[str, Any]] = []
        for family, certificate in _worst_failures(state).items():
            revalidated = revalidate(certificate, tol)
            if not revalidated:
                budget = SearchBudget(
                    max_samples=EXPLORE_BUDGET.max_samples,
                    hill_climb_steps=EXPLORE_BUDGET.hill_climb_steps,
                    seed=config.seed,
                )
                found = search_violation(
                    family, budget=budget, n_in=dims[family], enforce_hypotheses=True, tol=tol
                )
                if found is not None:
                    certificate, revalidated = found, revalidate(found, tol)
            entries.append(certificate_dict(certificate, revalidated))
            logger.info(
                f"   {family}: certificate violation {certificate.violation_eig:.6g}, revalidated={revalidated}"
            )
        state.report.certificates = entries
        logger.info(f"explore_findings completed in {time.time() - start_time:.2f}s: {len(entries)} certificates")
        return {"report": state.report}
    except Exception as e:
        return _failed(state, "explore_findings", start_time, e)


def generate_report(state: SuiteState) -> Dict[str, Any]:
    """Render the suite report in the configured format."""
    start_time = time.time()
    logger.info("Starting generate_report node")
    if state.report is None:
        logger.warning("No suite report available for rendering")
        return {"errors": state.errors + ["Prerequisites missing: suite report required"]}
    try:
        config = RunConfig(**state.config)
        payload = suite_report_dict(state.report, errors=state.errors)
        rendered = render(payload, config.format)
        logger.info(f"generate_report completed in {time.time() - start_time:.2f}s: {len(rendered)} characters")
        return {"rendered": rendered}
    except Exception as e:
        return _failed(state, "generate_report", start_time, e)


def create_workflow() -> StateGraph:
    """
    Create and configure the verification graph.

    Returns:
        StateGraph over SuiteState, not yet compiled
    """
    logger.info("Building verification workflow...")
    log_environment_config()

    workflow = StateGraph(SuiteState)
    workflow.add_node("prepare_suite", prepare_suite)
    workflow.add_node("execute_checks", execute_checks)
    workflow.add_node("explore_findings", explore_findings)
    workflow.add_node("generate_report", generate_report)

    workflow.add_edge("prepare_suite", "execute_checks")
    workflow.add_edge("execute_checks", "explore_findings")
    workflow.add_edge("explore_findings", "generate_report")
    workflow.add_edge("generate_report", END)
    workflow.set_entry_point("prepare_suite")
    return workflow


def run_verification(config: RunConfig) -> SuiteState:
    """
    Main entry point for the verify command.

    Args:
        config: validated run configuration

    Returns:
        final pipeline state; errors are collected rather than raised
    """
    pipeline_start_time = time.time()
    logger.info("Starting verification pipeline")
    logger.info(f"   Families: {', '.join(config.families) or '(none)'}")
    logger.info(f"   Dims: {config.dims}, trials: {config.trials}, seed: {config.seed}")

    initial_state = SuiteState(config=config.model_dump(mode="json"))
    try:
        app = create_workflow().compile()
        result = SuiteState(**app.invoke(initial_state))
    except Exception as e:
        error_msg = f"Pipeline execution failed after {time.time() - pipeline_start_time:.2f}s: {e}"
        logger.error(error_msg)
        return SuiteState(config=initial_state.config, errors=[error_msg])

    logger.info(f"Pipeline completed in {time.time() - pipeline_start_time:.2f}s")
    if result.errors:
        logger.warning(f"Pipeline completed with {len(result.errors)} errors:")
        for error in result.errors:
            logger.warning(f"     - {error}")
    return result
