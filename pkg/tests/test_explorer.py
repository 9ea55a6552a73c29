"""
Counterexample search, certificate re-validation and sharpness scans.
"""

import math

import numpy as np
import pytest

from src.engine import instance_from_json, instance_to_json
from src.errors import ConstraintViolationError
from src.explorer import parse_param_range, revalidate, search_violation, sharpness_scan
from src.explorer.search import CLIP_RATIO, project_positive
from src.explorer.sharpness import relative_gap
from src.linalg import min_eig
from src.schemas import Certificate, CheckResult, CheckStatus, SearchBudget


@pytest.fixture(scope="module")
def ch_op1_certificate():
    return search_violation("ch_op1", budget=SearchBudget(seed=7), n_in=3, n_out=2)


def test_search_finds_modulus_counterexample(ch_op1_certificate):
    assert ch_op1_certificate is not None
    assert ch_op1_certificate.family == "CH_OP1"
    assert ch_op1_certificate.violation_eig > 0
    assert ch_op1_certificate.instance.phi.n_out == 2


def test_certificate_revalidates(ch_op1_certificate):
    assert revalidate(ch_op1_certificate)


def test_certificate_survives_json(ch_op1_certificate):
    data = instance_to_json(ch_op1_certificate.instance)
    restored = Certificate(
        instance=instance_from_json(data),
        violation_eig=ch_op1_certificate.violation_eig,
        family=ch_op1_certificate.family,
    )
    assert revalidate(restored)


def test_tampered_certificate_does_not_revalidate(ch_op1_certificate):
    tampered = Certificate(
        instance=ch_op1_certificate.instance,
        violation_eig=ch_op1_certificate.violation_eig + 1e-3,
        family=ch_op1_certificate.family,
    )
    assert not revalidate(tampered)


def test_search_is_reproducible():
    budget = SearchBudget(max_samples=400, hill_climb_steps=20, seed=3)
    first = search_violation("CH_OP2", budget=budget, n_in=3, n_out=2)
    second = search_violation("CH_OP2", budget=budget, n_in=3, n_out=2)
    assert (first is None) == (second is None)
    if first is not None:
        assert first.violation_eig == second.violation_eig


def test_theorem_family_has_no_certificate_under_its_hypotheses():
    budget = SearchBudget(max_samples=150, hill_climb_steps=10, seed=1)
    assert search_violation("KADISON", budget=budget, n_in=3, enforce_hypotheses=True) is None


def test_parameter_override_is_applied():
    budget = SearchBudget(max_samples=60, hill_climb_steps=5, seed=2)
    found = search_violation(
        "POWER_CD", param_ranges={"p": (3.0, 3.0)}, budget=budget, n_in=3, enforce_hypotheses=True
    )
    assert found is None


@pytest.mark.parametrize(
    "text, expected",
    [("gamma=0.2:0.8", ("gamma", (0.2, 0.8))), ("p=3", ("p", (3.0, 3.0))), (" r =0:0.5", ("r", (0.0, 0.5)))],
)
def test_parse_param_range(text, expected):
    assert parse_param_range(text) == expected


@pytest.mark.parametrize("text", ["zeta=1", "p", "p=2:1", "p=a:b"])
def test_parse_param_range_rejects(text):
    with pytest.raises(ConstraintViolationError):
        parse_param_range(text)


def test_project_positive_clips_spectrum():
    X = np.array([[1.0, 2.0], [2.0, 1.0]])
    projected = project_positive(X)
    assert min_eig(projected) >= CLIP_RATIO * 3.0 * (1 - 1e-9)
    assert min_eig(projected) > 0


def test_search_budget_must_be_positive():
    with pytest.raises(ConstraintViolationError):
        SearchBudget(max_samples=0)


def test_sharpness_scan_over_gamma():
    points = sharpness_scan("ASY", {"gamma": [0.25, 0.75]}, trials=3, seed=1, dim=3)
    assert [p.params for p in points] == [{"gamma": 0.25}, {"gamma": 0.75}]
    for point in points:
        assert point.evaluated == 3
        assert point.min_relative_gap >= -1e-8
        assert point.scalar_check_gap == pytest.approx(0.0, abs=1e-9)


def test_sharpness_grid_is_cartesian():
    points = sharpness_scan("M4", {"alpha": [0.0, 0.2], "beta": [0.5, 1.0]}, trials=1, seed=4, dim=2)
    assert len(points) == 4
    assert {tuple(sorted(p.params.items())) for p in points} == {
        (("alpha", a), ("beta", b)) for a in (0.0, 0.2) for b in (0.5, 1.0)
    }


def test_sharpness_outside_hypotheses_counts_nothing():
    (point,) = sharpness_scan("ASY", {"gamma": [1.5]}, trials=2, seed=1, dim=2)
    assert point.evaluated == 0
    assert math.isnan(point.min_relative_gap)


def test_relative_gap_of_skipped_check():
    assert relative_gap(CheckResult(family="ASY", status=CheckStatus.SKIPPED)) is None
