"""
Report encoding and rendering.
"""

import json
import math

import numpy as np

from src import __version__
from src.config import OutputFormat
from src.engine import check_inequality, refutation_instance
from src.reporting import check_result_dict, envelope, render, suite_report_dict, to_json_text, write_report
from src.schemas import FamilyStats, SuiteReport, ToleranceConfig


def test_floats_keep_seventeen_digits():
    assert to_json_text({"x": 0.1}) == '{\n  "x": 0.10000000000000001\n}\n'
    assert json.loads(to_json_text({"x": 1 / 3}))["x"] == 1 / 3


def test_non_finite_floats_become_null():
    data = json.loads(to_json_text({"a": math.nan, "b": [math.inf, 1.0]}))
    assert data == {"a": None, "b": [None, 1.0]}


def test_numpy_scalars_and_arrays():
    text = to_json_text({"flag": np.bool_(True), "n": np.int64(3), "v": np.array([0.5, 2.0])})
    assert json.loads(text) == {"flag": True, "n": 3, "v": [0.5, 2.0]}


def test_envelope_keys_and_order():
    data = envelope("constants", {"value": 1.125}, seed=4, tolerance=ToleranceConfig())
    assert list(data) == ["schema", "tool", "version", "kind", "banner", "seed", "tolerance", "config", "value"]
    assert data["version"] == __version__
    assert data["tolerance"] == {"atol": 1e-10, "rtol": 1e-9}
    assert "Φ(A)² ≤ Φ(A²)" in data["banner"]


def test_check_result_dict(tol):
    result = check_inequality("CH_OP2", refutation_instance(), tol)
    data = check_result_dict(result)
    assert data["status"] == "failed"
    assert data["lhs"]["n"] == 2
    assert [h["name"] for h in data["hypotheses"]] == ["A_positive", "B_positive"]
    assert "lhs" not in check_result_dict(result, include_matrices=False)


def test_suite_report_summary():
    report = SuiteReport(
        families=[
            FamilyStats(family="KADISON", trials=4, passes=4, worst_gap=0.0),
            FamilyStats(family="CH_OP1", trials=4, passes=1, failures=3, worst_gap=-0.2, theorem=False),
        ],
        seed=9,
        errors=["KADISON#2: ConvergenceError: no convergence"],
    )
    data = suite_report_dict(report, errors=["late error"])
    assert data["kind"] == "suite"
    assert data["summary"] == {"families": 2, "trials": 8, "failures": 3, "theorem_failures": 0}
    assert data["errors"] == ["KADISON#2: ConvergenceError: no convergence", "late error"]


def test_identical_payloads_render_identically():
    payload = envelope("constants", {"value": math.sqrt(2)}, seed=1)
    assert render(payload) == render(dict(payload))


def test_text_rendering_uses_tables():
    report = SuiteReport(families=[FamilyStats(family="ASY", trials=2, passes=2, worst_gap=1e-3)], seed=2)
    text = render(suite_report_dict(report), OutputFormat.TEXT)
    assert "families" in text
    assert "ASY" in text
    assert "kind: suite" in text


def test_write_report_creates_directories(tmp_path):
    path = tmp_path / "nested" / "report.json"
    write_report("{}\n", path)
    assert path.read_text(encoding="utf-8") == "{}\n"
