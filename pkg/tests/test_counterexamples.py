"""
The fixed 3×3 refutations and the moment block criterion.
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.engine import check_moment_matrix, reproduce_counterexamples
from src.engine.moment import moment_block
from src.errors import ConstraintViolationError


@pytest.fixture(scope="module")
def refutations():
    report = reproduce_counterexamples()
    return {entry["family"]: entry for entry in report["refutations"]}


def test_report_describes_the_instance():
    report = reproduce_counterexamples()
    assert report["map"] == {"variant": "Compression", "n_in": 3, "k": 2}
    assert report["A"] == [[2.0, 0.0, 0.0], [0.0, 2.0, 1.0], [0.0, 1.0, 3.0]]
    assert [entry["family"] for entry in report["refutations"]] == ["CH_OP1", "CH_OP2"]


def test_modulus_form_matches_displayed_values(refutations):
    entry = refutations["CH_OP1"]
    assert_allclose(entry["lhs"], [[4.0, 2.0], [2.0, 4.0]], atol=1e-12)
    assert_allclose(entry["rhs"], [[4.0, 2.4], [2.4, 3.89]], atol=5e-3)
    assert entry["max_deviation_from_printed"] < 5e-3
    assert entry["matches_printed"] is True


def test_sandwich_form_matches_displayed_values(refutations):
    entry = refutations["CH_OP2"]
    assert_allclose(entry["lhs"], [[8.0, 4.0], [4.0, 8.0]], atol=1e-12)
    assert_allclose(entry["rhs"], [[8.0, 6.0], [6.0, 9.0]], atol=1e-12)


@pytest.mark.parametrize("family", ["CH_OP1", "CH_OP2"])
def test_both_orders_fail(refutations, family):
    entry = refutations[family]
    assert entry["holds"] is False
    assert min(entry["difference_eigenvalues"]) < -1e-3
    assert entry["gap_min_eig"] == pytest.approx(min(entry["difference_eigenvalues"]), abs=1e-12)


@pytest.mark.parametrize("family", ["CH_OP1", "CH_OP2"])
def test_unitary_relaxation_fails_too(refutations, family):
    assert refutations[family]["dominance_holds"] is False
    assert refutations[family]["dominance_gap"] < 0


def test_dominance_can_be_left_out():
    report = reproduce_counterexamples(with_dominance=False)
    for entry in report["refutations"]:
        assert "dominance_holds" not in entry
        assert "dominance_gap" not in entry


@pytest.mark.parametrize("r", [1, 2, 3])
def test_moment_matrix_is_positive(compression, fixed_A, tol, r):
    result = check_moment_matrix(compression, fixed_A, r, tol)
    assert result.passed
    assert result.rhs.shape == (2 * (r + 1), 2 * (r + 1))


def test_order_one_block_is_the_kadison_criterion(compression, fixed_A):
    block = moment_block(compression, fixed_A, 1)
    phi_a = compression(fixed_A)
    assert_allclose(block[:2, :2], np.eye(2), atol=1e-15)
    assert_allclose(block[:2, 2:], phi_a, atol=1e-15)
    assert_allclose(block[2:, 2:], compression(fixed_A @ fixed_A), atol=1e-12)


def test_moment_matrix_on_indefinite_operand(trace_map, tol):
    A = np.array([[-1.0, 2.0], [2.0, 0.5]])
    assert check_moment_matrix(trace_map, A, 2, tol).passed


@pytest.mark.parametrize("r", [0, -1, 1.5])
def test_moment_order_must_be_a_positive_integer(compression, fixed_A, r):
    with pytest.raises(ConstraintViolationError):
        check_moment_matrix(compression, fixed_A, r)
