"""
Report emission: one JSON structure per command, rendered as JSON or as
rich tables.

Floats are written with 17 significant digits so identical runs produce
byte-identical reports.
"""

import io
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from rich.console import Console
from rich.table import Table

from .. import __version__
from ..config import OutputFormat
from ..engine.instances import instance_to_json
from ..linalg.matrix_io import matrix_to_json
from ..schemas import Certificate, CheckResult, FamilyStats, SuiteReport, ToleranceConfig

logger = logging.getLogger(__name__)

REPORT_SCHEMA = 1
TOOL_NAME = "asymmetric-choi-davis-verifier"
KADISON_BANNER = (
    "KADISON is checked in its standard form Φ(A)² ≤ Φ(A²); "
    "the display Φ(A)² ≤ Φ(A)² is read as a typo"
)


def format_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def _encode(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, Path):
        return json.dumps(str(obj), ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_encode(v, indent, level + 1)}"
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, indent, level + 1) for v in seq) + "\n" + end + "]"
    raise TypeError(f"Cannot encode {type(obj).__name__} in a report")


def to_json_text(obj: Any, indent: int = 2) -> str:
    """Serialize with fixed float formatting; keys keep insertion order."""
    return _encode(obj, indent, 0) + "\n"


def tolerance_dict(tol: ToleranceConfig) -> Dict[str, float]:
    return {"atol": tol.atol, "rtol": tol.rtol}


def envelope(
    kind: str,
    payload: Dict[str, Any],
    seed: Optional[int] = None,
    tolerance: Optional[ToleranceConfig] = None,
    config: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    """Wrap a payload with schema, tool version, banner, seed, tolerance and config echo."""
    data: Dict[str, Any] = {
        "schema": REPORT_SCHEMA,
        "tool": TOOL_NAME,
        "version": __version__,
        "kind": kind,
        "banner": KADISON_BANNER,
        "seed": seed,
        "tolerance": tolerance_dict(tolerance) if tolerance is not None else None,
        "config": config or {},
    }
    data.update(payload)
    return data


def family_stats_dict(stats: FamilyStats) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "family": stats.family,
        "theorem": stats.theorem,
        "trials": stats.trials,
        "passes": stats.passes,
        "skips": stats.skips,
        "failures": stats.failures,
        "worst_gap": stats.worst_gap,
    }
    if stats.example_witness is not None:
        data["example_witness"] = stats.example_witness
    return data


def suite_report_dict(report: SuiteReport, errors: Optional[List[str]] = None) -> Dict[str, Any]:
    families = [family_stats_dict(s) for s in report.families]
    payload = {
        "summary": {
            "families": len(families),
            "trials": sum(s.trials for s in report.families),
            "failures": sum(s.failures for s in report.families),
            "theorem_failures": report.theorem_failures,
        },
        "families": families,
        "certificates": report.certificates,
        "errors": list(report.errors) + list(errors or []),
    }
    return envelope("suite", payload, report.seed, report.tolerance, report.config_echo)


def check_result_dict(result: CheckResult, include_matrices: bool = True) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "family": result.family,
        "status": result.status.value,
        "gap_min_eig": result.gap,
        "tolerance_used": None if result.verdict is None else result.verdict.tolerance_used,
        "constant": result.constant,
        "hypotheses": [
            {"name": h.name, "state": h.state.value, "detail": h.detail} for h in result.hypotheses
        ],
        "notes": list(result.notes),
    }
    if result.chain_gaps is not None:
        data["chain"] = [
            {"link": label, "gap": gap} for label, gap in zip(result.chain_labels, result.chain_gaps)
        ]
    if result.isometry is not None:
        data["isometry_rank"] = result.isometry.rank
    if include_matrices and result.lhs is not None:
        data["lhs"] = matrix_to_json(result.lhs)
        data["rhs"] = matrix_to_json(result.rhs)
    return data


def certificate_dict(certificate: Certificate, revalidated: bool) -> Dict[str, Any]:
    return {
        "family": certificate.family,
        "violation_eig": certificate.violation_eig,
        "revalidated": revalidated,
        "instance": instance_to_json(certificate.instance),
    }


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return "—" if not math.isfinite(value) else f"{value:.6g}"
    if isinstance(value, dict):
        if "entries" in value:
            return f"matrix {value['n']}×{value.get('n_cols', value['n'])}"
        return ", ".join(f"{k}={_cell(v)}" for k, v in value.items())
    if isinstance(value, list):
        if value and isinstance(value[0], list):
            return "; ".join(" ".join(_cell(x) for x in row) for row in value)
        return ", ".join(_cell(v) for v in value)
    return "—" if value is None else str(value)


def _table(title: str, rows: List[Dict[str, Any]]) -> Table:
    columns: List[str] = []
    for row in rows:
        columns += [k for k in row if k not in columns]
    table = Table(title=title)
    for column in columns:
        table.add_column(column)
    for row in rows:
        table.add_row(*(_cell(row.get(c)) for c in columns))
    return table


def render_text(payload: Dict[str, Any], width: int = 140) -> str:
    """Rich rendering of a report dict: scalars as lines, lists of records as tables."""
    console = Console(record=True, width=width, file=io.StringIO(), color_system=None)
    for key, value in payload.items():
        if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            console.print(_table(key, value))
        elif isinstance(value, dict) and value and key != "config":
            console.print(_table(key, [value]))
        else:
            console.print(f"{key}: {_cell(value)}")
    return console.export_text()


def render(payload: Dict[str, Any], fmt: OutputFormat = OutputFormat.JSON) -> str:
    if OutputFormat(fmt) is OutputFormat.TEXT:
        return render_text(payload)
    return to_json_text(payload)


def write_report(text: str, output_path: Path) -> None:
    """Write a rendered report, creating parent directories."""
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with open(output_path, "w", encoding="utf-8") as f:
        f.write(text)
    logger.info(f"Report saved to: {output_path.absolute()}")
