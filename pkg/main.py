#!/usr/bin/env python3
"""
Command-line interface for the operator inequality verifier.

Usage:
    python main.py verify --families kadison,asy --dims 2,4 --trials 500 --seed 7
    python main.py counterexample --paper
    python main.py constants --kappa h=2 p=2
    python main.py search --family ch_op1 --n-in 3 --samples 20000
    python main.py certify --function "pow(t,3)" --property operator-convex --dim 2

Exit codes: 0 all theorem checks passed, 1 violation where a theorem predicts
none, 2 usage or configuration error, 3 numerical non-convergence.
"""

import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import typer
from dotenv import load_dotenv
from pydantic import ValidationError
from rich.console import Console

# Load environment variables from .env file
load_dotenv()

from src import __version__
from src.config import Command, OutputFormat, RunConfig, get_settings, load_suite_defaults, suite_profile
from src.constants import k1, k2, k_m4, k_nakamoto, k_power, k_reverse_theorem, k_three, kappa
from src.engine import evaluate, family_spec, instance_from_json, normalize_family, reproduce_counterexamples
from src.engine.instances import gallery_fn
from src.errors import ConfigError, ConvergenceError, VerifierError
from src.explorer import parse_param_range, revalidate, search_violation
from src.functions import certify as certify_fn
from src.functions import lfmps_crosscheck, parse_scalar_fn
from src.linalg import matrix_to_json
from src.orchestrator import run_verification
from src.reporting import certificate_dict, check_result_dict, envelope, render, to_json_text, write_report
from src.schemas import CheckStatus, ConvexityCertificate, ConvexityProperty, SearchBudget, SpectralBounds

app = typer.Typer(
    name="verify-inequalities",
    help="Numerical verification and counterexample search for asymmetric Choi–Davis and Kadison inequalities.",
    add_completion=False,
)
console = Console(stderr=True)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_CONVERGENCE = 3


def setup_logging(verbose: bool = False) -> None:
    """Setup logging configuration; stdout is left to the reports."""
    level = logging.DEBUG if verbose else logging.INFO

    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[
            logging.StreamHandler(sys.stderr),
            logging.FileHandler("verification.log"),
        ],
    )


def _exit_code(e: Exception) -> int:
    if isinstance(e, ConvergenceError):
        console.print(f"Numerical non-convergence: {e}", style="bold red")
        return EXIT_CONVERGENCE
    if isinstance(e, (VerifierError, ValidationError, ValueError, FileNotFoundError)):
        console.print(f"Error: {e}", style="bold red")
        return EXIT_USAGE
    logger.error(f"An unexpected error occurred: {e}", exc_info=True)
    console.print(f"An unexpected error occurred: {e}", style="bold red")
    console.print("Check the verification.log file for more details.")
    return EXIT_VIOLATION


def _guarded(action: Callable[[], int]) -> None:
    try:
        code = action()
    except KeyboardInterrupt:
        console.print("\nStopped by user.")
        code = EXIT_VIOLATION
    except Exception as e:
        code = _exit_code(e)
    raise typer.Exit(code)


def _split(text: Optional[str]) -> List[str]:
    return [item.strip() for item in (text or "").split(",") if item.strip()]


def _ints(text: str, flag: str) -> List[int]:
    try:
        return [int(item) for item in _split(text)]
    except ValueError:
        raise ConfigError(f"{flag} expects comma-separated integers, got {text!r}")


def _write(text: str, output: Optional[Path]) -> None:
    if output is None:
        typer.echo(text, nl=False)
    else:
        write_report(text, output)
        console.print(f"Report saved to: {output}")


def _emit(payload: Dict[str, Any], fmt: OutputFormat, output: Optional[Path]) -> None:
    _write(render(payload, fmt), output)


def _has_convergence_error(errors: List[str]) -> bool:
    return any(ConvergenceError.__name__ in error for error in errors)


def _load_json(path: Path) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Invalid JSON in {path}: {e}")


def _verify_input(config: RunConfig) -> int:
    data = _load_json(config.input)
    family = data.get("family") or (config.families[0] if len(config.families) == 1 else None)
    if family is None:
        raise ConfigError("--input needs a \"family\" key or exactly one --families entry")
    family = normalize_family(family)
    tol = config.tolerance()
    result = evaluate(family, instance_from_json(data.get("instance", data)), tol)
    payload = envelope("check", check_result_dict(result), config.seed, tol, config.echo())
    _emit(payload, config.format, config.output)
    if result.status is CheckStatus.FAILED and family_spec(family).theorem:
        return EXIT_VIOLATION
    return EXIT_OK


@app.command()
def verify(
    families: Optional[str] = typer.Option(None, "--families", help="Comma-separated family ids."),
    dims: Optional[str] = typer.Option(None, "--dims", help="Comma-separated dimensions in [2, 16]."),
    trials: Optional[int] = typer.Option(None, "--trials", help="Trials per family."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Base seed."),
    atol: Optional[float] = typer.Option(None, "--atol", help="Absolute tolerance override."),
    rtol: Optional[float] = typer.Option(None, "--rtol", help="Relative tolerance override."),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Write the report here instead of stdout."),
    fmt: OutputFormat = typer.Option(OutputFormat.JSON, "--format", help="Report format."),
    workers: Optional[int] = typer.Option(None, "--workers", help="Concurrent trials."),
    input_path: Optional[Path] = typer.Option(None, "--input", help="Evaluate one explicit instance JSON."),
    no_explore: bool = typer.Option(False, "--no-explore", help="Skip certificate search for failing families."),
    profile: Optional[str] = typer.Option(None, "--profile", help="Named profile from the suite definition, e.g. acceptance."),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Enable more detailed logging."),
):
    """Run seeded property suites over the inequality families."""
    setup_logging(verbose)

    def action() -> int:
        settings = get_settings()
        defaults = suite_profile(load_suite_defaults(), profile)
        config = RunConfig(
            command=Command.VERIFY,
            families=_split(families) if families is not None else defaults.get("families", []),
            dims=_ints(dims, "--dims") if dims is not None else defaults.get("dims", [2, 3, 4]),
            trials=trials if trials is not None else defaults.get("trials", 50),
            seed=seed if seed is not None else settings.seed,
            atol=atol,
            rtol=rtol,
            output=output,
            format=fmt,
            workers=workers if workers is not None else defaults.get("workers", settings.workers),
            input=input_path,
            explore_failures=not no_explore,
            profile=profile,
            eig_solver=defaults.get("eig_solver"),
        )
        if config.input is not None:
            return _verify_input(config)

        state = run_verification(config)
        if state.report is None:
            for error in state.errors:
                console.print(f"  - {error}", style="red")
            return EXIT_CONVERGENCE if _has_convergence_error(state.errors) else EXIT_VIOLATION
        _write(state.rendered, config.output)

        errors = state.report.errors + state.errors
        if state.report.theorem_failures > 0:
            console.print(f"{state.report.theorem_failures} theorem check(s) failed", style="bold red")
            return EXIT_VIOLATION
        if _has_convergence_error(errors):
            return EXIT_CONVERGENCE
        return EXIT_OK

    _guarded(action)


@app.command()
def counterexample(
    refutations_only: bool = typer.Option(False, "--paper", help="Only the two refutations of the naive Chebyshev orders."),
    output: Optional[Path] = typer.Option(None, "--output", "-o"),
    fmt: OutputFormat = typer.Option(OutputFormat.JSON, "--format"),
    verbose: bool = typer.Option(False, "--verbose", "-v"),
):
    """Reproduce the 3×3 refutations of |Φ(B)Φ(A)| ≤ Φ(A^½BA^½) and Φ(A)Φ(B)Φ(A) ≤ Φ(ABA)."""
    setup_logging(verbose)

    def action() -> int:
        config = RunConfig(command=Command.COUNTEREXAMPLE, output=output, format=fmt)
        tol = config.tolerance()
        payload = reproduce_counterexamples(tol, with_dominance=not refutations_only)
        _emit(envelope("counterexample", payload, None, tol, config.echo()), config.format, config.output)
        return EXIT_OK

    _guarded(action)


def _bounds(args: Dict[str, Any]) -> SpectralBounds:
    return SpectralBounds(args["m"], args["M"])


# name -> (required keys, evaluator)
CONSTANTS: Dict[str, Tuple[Tuple[str, ...], Callable[[Dict[str, Any]], float]]] = {
    "kappa": (("h", "p"), lambda a: kappa(a["h"], a["p"])),
    "k_power": (("m", "M", "p"), lambda a: k_power(_bounds(a), a["p"])),
    "k1": (("m", "M", "f"), lambda a: k1(_bounds(a), a["f"])),
    "k2": (("m", "M", "f"), lambda a: k2(_bounds(a), a["f"])),
    "k_reverse": (("m", "M", "f"), lambda a: k_reverse_theorem(_bounds(a), a["f"])),
    "k_nakamoto": (("h", "gamma"), lambda a: k_nakamoto(a["h"], a["gamma"])),
    "k_m4": (("h", "alpha", "beta"), lambda a: k_m4(a["h"], a["alpha"], a["beta"], a.get("variant", "auto"))),
    "k_three": (
        ("h", "alpha", "beta", "gamma"),
        lambda a: k_three(a["h"], a["alpha"], a["beta"], a["gamma"], a.get("variant", "auto")),
    ),
}


def parse_constant_args(items: List[str]) -> Dict[str, Any]:
    """key=value pairs; f is a scalar function on (0, ∞), variant a string, the rest numbers."""
    parsed: Dict[str, Any] = {}
    for item in items:
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"Expected key=value, got {item!r}")
        if key == "f":
            parsed[key] = gallery_fn(value)
        elif key == "variant":
            parsed[key] = value.strip()
        else:
            try:
                parsed[key] = float(value)
            except ValueError:
                raise ConfigError(f"{key} must be a number, got {value!r}")
    return parsed


@app.command()
def constants(
    args: Optional[List[str]] = typer.Argument(None, help="key=value arguments, e.g. h=2 p=2 or m=1 M=4 f=sqrt(t)."),
    use_kappa: bool = typer.Option(False, "--kappa", help="κ(h, p)."),
    use_k_power: bool = typer.Option(False, "--k-power", help="K(m, M, p)."),
    use_k1: bool = typer.Option(False, "--k1", help="K₁(m, M, f) for concave f."),
    use_k2: bool = typer.Option(False, "--k2", help="K₂(m, M, f) for convex f."),
    use_k_reverse: bool = typer.Option(False, "--k-reverse", help="Constant reversing Φ(A f(A)) ≤ |Φ(f(A))Φ(A)|."),
    use_k_nakamoto: bool = typer.Option(False, "--k-nakamoto", help="Constant of Φ(A^{1+γ}) ≤ K|Φ(A^γ)Φ(A)|."),
    use_k_m4: bool = typer.Option(False, "--k-m4", help="Constant of Φ(A^{α+β}) ≤ K|Φ(A^α)Φ(A^β)|."),
    use_k_three: bool = typer.Option(False, "--k-three", help="Three-parameter constant."),
    output: Optional[Path] = typer.Option(None, "--output", "-o"),
    fmt: OutputFormat = typer.Option(OutputFormat.JSON, "--format"),
    verbose: bool = typer.Option(False, "--verbose", "-v"),
):
    """Evaluate one Kantorovich-type constant."""
    setup_logging(verbose)
    selected = {
        "kappa": use_kappa,
        "k_power": use_k_power,
        "k1": use_k1,
        "k2": use_k2,
        "k_reverse": use_k_reverse,
        "k_nakamoto": use_k_nakamoto,
        "k_m4": use_k_m4,
        "k_three": use_k_three,
    }

    def action() -> int:
        config = RunConfig(command=Command.CONSTANTS, output=output, format=fmt)
        chosen = [name for name, on in selected.items() if on]
        if len(chosen) != 1:
            raise ConfigError(f"Select exactly one constant flag, got {len(chosen)}")
        name = chosen[0]
        required, evaluator = CONSTANTS[name]
        parsed = parse_constant_args(args or [])
        missing = [key for key in required if key not in parsed]
        if missing:
            raise ConfigError(f"{name} needs {', '.join(missing)}")
        value = evaluator(parsed)
        arguments = {k: (v.to_text() if hasattr(v, "to_text") else v) for k, v in parsed.items()}
        payload = {"constant": name, "arguments": arguments, "value": value}
        payload = envelope("constants", payload, None, config.tolerance(), config.echo())
        _emit(payload, config.format, config.output)
        return EXIT_OK

    _guarded(action)


@app.command()
def search(
    family: str = typer.Option(..., "--family", help="Family id to search."),
    n_in: int = typer.Option(3, "--n-in", help="Dimension of A."),
    n_out: Optional[int] = typer.Option(None, "--n-out", help="Output dimension of Φ; drawn per restart if omitted."),
    samples: int = typer.Option(2000, "--samples", help="Evaluation budget."),
    steps: int = typer.Option(60, "--steps", help="Hill-climb steps per restart."),
    param: Optional[List[str]] = typer.Option(None, "--param", help="Exponent range name=lo:hi (repeatable)."),
    seed: Optional[int] = typer.Option(None, "--seed"),
    enforce: bool = typer.Option(False, "--enforce-hypotheses", help="Keep hypothesis gating."),
    workers: Optional[int] = typer.Option(None, "--workers"),
    emit_certificate: Optional[Path] = typer.Option(None, "--emit-certificate", help="Write the certificate JSON here."),
    output: Optional[Path] = typer.Option(None, "--output", "-o"),
    fmt: OutputFormat = typer.Option(OutputFormat.JSON, "--format"),
    verbose: bool = typer.Option(False, "--verbose", "-v"),
):
    """Hill-climb for an instance violating a family's inequality."""
    setup_logging(verbose)

    def action() -> int:
        settings = get_settings()
        config = RunConfig(
            command=Command.SEARCH,
            families=[family],
            dims=[n_in],
            seed=seed if seed is not None else settings.seed,
            output=output,
            format=fmt,
            workers=workers if workers is not None else settings.workers,
            emit_certificate=emit_certificate,
        )
        name = config.families[0]
        ranges = dict(parse_param_range(text) for text in param or [])
        budget = SearchBudget(max_samples=samples, hill_climb_steps=steps, seed=config.seed)
        tol = config.tolerance()
        found = search_violation(
            name,
            param_ranges=ranges or None,
            budget=budget,
            n_in=n_in,
            n_out=n_out,
            enforce_hypotheses=enforce,
            workers=config.workers,
            tol=tol,
        )
        payload: Dict[str, Any] = {"family": name, "found": found is not None, "certificate": None}
        if found is not None:
            entry = certificate_dict(found, revalidate(found, tol))
            payload["certificate"] = entry
            if config.emit_certificate is not None:
                write_report(to_json_text(entry), config.emit_certificate)
        _emit(envelope("search", payload, config.seed, tol, config.echo()), config.format, config.output)
        if found is not None and enforce and family_spec(name).theorem:
            return EXIT_VIOLATION
        return EXIT_OK

    _guarded(action)


def _certificate_entry(cert: ConvexityCertificate) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "function": cert.function,
        "property": cert.property.value,
        "verdict": cert.verdict.value,
        "trials": cert.trials,
        "max_violation": cert.max_violation,
        "tolerance": cert.tolerance,
    }
    if cert.witness is not None:
        A, B, lam = cert.witness
        data["witness"] = {"A": matrix_to_json(A), "B": matrix_to_json(B), "lambda": lam}
    return data


@app.command()
def certify(
    function: str = typer.Option(..., "--function", help="Scalar function, e.g. pow(t,3)."),
    prop: str = typer.Option(
        ..., "--property", help="operator-convex, operator-concave, operator-monotone or lfmps."
    ),
    dim: int = typer.Option(4, "--dim"),
    trials: int = typer.Option(500, "--trials"),
    seed: Optional[int] = typer.Option(None, "--seed"),
    output: Optional[Path] = typer.Option(None, "--output", "-o"),
    fmt: OutputFormat = typer.Option(OutputFormat.JSON, "--format"),
    verbose: bool = typer.Option(False, "--verbose", "-v"),
):
    """Sample for violations of an operator convexity or monotonicity property."""
    setup_logging(verbose)

    def action() -> int:
        config = RunConfig(
            command=Command.CERTIFY,
            dims=[dim],
            trials=trials,
            seed=seed if seed is not None else get_settings().seed,
            output=output,
            format=fmt,
        )
        if prop == "lfmps":
            report = lfmps_crosscheck(gallery_fn(function), dim, trials, config.seed)
            payload: Dict[str, Any] = {
                "function": report.function,
                "consistent": report.consistent,
                "certificates": [
                    {"condition": name, **_certificate_entry(cert)} for name, cert in report.certificates.items()
                ],
            }
        else:
            try:
                target = ConvexityProperty(prop)
            except ValueError:
                raise ConfigError(f"Unknown property {prop!r}")
            cert = certify_fn(
                parse_scalar_fn(function), target, dim=dim, trials=trials, seed=config.seed, tol=config.tolerance()
            )
            payload = _certificate_entry(cert)
        payload = envelope("certify", payload, config.seed, config.tolerance(), config.echo())
        _emit(payload, config.format, config.output)
        return EXIT_OK

    _guarded(action)


@app.command()
def version():
    """Show version information."""
    typer.echo(f"verify-inequalities v{__version__}")
    typer.echo("Asymmetric Choi–Davis and Kadison inequality verifier")


if __name__ == "__main__":
    app()
