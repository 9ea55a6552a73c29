"""
Partial-isometry checks in constructive and dominance modes.
"""

import numpy as np
import pytest

from src.constants import k_m4
from src.engine import check_with_isometry, sample_instance
from src.engine.instances import positive_power
from src.errors import SingularOperandError
from src.functions import constant_fn
from src.linalg.sampling import trial_rng
from src.schemas import CheckMode, CheckStatus, ExponentParams, Instance, SpectralBounds


@pytest.fixture
def po1_instance(compression, fixed_A):
    return Instance(
        phi=compression,
        A=fixed_A,
        f=positive_power(2.0),
        g=positive_power(-1.0),
        params=ExponentParams(r=0.25),
    )


def test_po1_constructive_chain(po1_instance, tol):
    result = check_with_isometry("PO1", po1_instance, CheckMode.CONSTRUCTIVE, tol)
    assert result.passed
    assert len(result.chain_gaps) == 4
    assert result.chain_labels[1] == "|T| = W*|T*|W"
    assert result.isometry.rank == 2


def test_po1_dominance_mode(po1_instance, tol):
    result = check_with_isometry("PO1", po1_instance, CheckMode.DOMINANCE, tol)
    assert result.passed
    assert result.chain_gaps is None


def test_po1_needs_concave_quotient(compression, fixed_A, tol):
    inst = Instance(
        phi=compression, A=fixed_A, f=constant_fn(1.0), g=constant_fn(1.0), params=ExponentParams(r=0.25)
    )
    result = check_with_isometry("PO1", inst, CheckMode.CONSTRUCTIVE, tol)
    assert result.status is CheckStatus.SKIPPED
    assert "fg_over_t_operator_concave" in result.notes[0]


def test_tt1m1_with_quarter_powers(compression, fixed_A, tol):
    inst = Instance(phi=compression, A=fixed_A, f=positive_power(0.25), g=positive_power(0.25))
    assert check_with_isometry("TT1M1", inst, CheckMode.CONSTRUCTIVE, tol).passed
    assert check_with_isometry("TT1M1", inst, CheckMode.DOMINANCE, tol).passed


@pytest.mark.parametrize("family", ["PO1", "PO1_REVERSE", "TT1M1", "TT1M2", "ME1"])
def test_gallery_instances_pass(family, tol):
    for trial in range(3):
        inst = sample_instance(family, 3, trial_rng(11, family, trial))
        result = check_with_isometry(family, inst, CheckMode.CONSTRUCTIVE, tol)
        assert result.status is not CheckStatus.FAILED, result.notes


def test_me1_without_middle_exponent_uses_two_exponent_constant(compression, fixed_A, tol):
    inst = Instance(
        phi=compression,
        A=fixed_A,
        params=ExponentParams(alpha=0.3, beta=0.0, gamma=1.0),
        bounds=SpectralBounds(1.0, 4.0),
    )
    result = check_with_isometry("ME1", inst, CheckMode.CONSTRUCTIVE, tol)
    assert result.passed
    assert result.constant == pytest.approx(k_m4(4.0, 0.3, 1.0), rel=1e-12)
    assert "printed factor" in result.notes


def test_me1_requires_bounds(compression, fixed_A, tol):
    inst = Instance(phi=compression, A=fixed_A, params=ExponentParams(alpha=0.3, beta=0.2, gamma=1.0))
    result = check_with_isometry("ME1", inst, CheckMode.CONSTRUCTIVE, tol, enforce_hypotheses=False)
    assert result.status is CheckStatus.SKIPPED


def test_dominance_mode_rejects_singular_operand(compression, tol):
    inst = Instance(phi=compression, A=np.diag([0.0, 1.0, 2.0]), f=positive_power(0.25), g=positive_power(0.25))
    with pytest.raises(SingularOperandError):
        check_with_isometry("TT1M1", inst, CheckMode.DOMINANCE, tol)


def test_rejects_other_family_kinds(compression, fixed_A, tol):
    with pytest.raises(ValueError, match="not a partial-isometry family"):
        check_with_isometry("KADISON", Instance(phi=compression, A=fixed_A), tol=tol)


def test_me1_at_identity_leaves_only_the_constant(compression, tol):
    inst = Instance(
        phi=compression,
        A=np.eye(3),
        params=ExponentParams(alpha=0.4, beta=0.3, gamma=0.8),
        bounds=SpectralBounds(0.5, 2.0),
    )
    result = check_with_isometry("ME1", inst, CheckMode.CONSTRUCTIVE, tol)
    assert result.passed
    assert result.constant >= 1.0
    np.testing.assert_allclose(result.rhs, result.constant * np.eye(2), atol=1e-12)


@pytest.mark.parametrize("mode", [CheckMode.CONSTRUCTIVE, CheckMode.DOMINANCE])
def test_me1_three_exponents(compression, tol, mode):
    A = np.array([[1.5, 0.2, 0.0], [0.2, 1.5, 0.1], [0.0, 0.1, 1.4]])
    inst = Instance(
        phi=compression,
        A=A,
        params=ExponentParams(alpha=0.4, beta=0.3, gamma=0.8),
        bounds=SpectralBounds(1.0, 2.0),
    )
    assert check_with_isometry("ME1", inst, mode, tol).passed


def test_po1_with_unit_functions_fails_when_relaxed(compression, fixed_A, tol):
    # Φ(A)^r ≥ Φ(A^r) here, strictly on the coupled coordinate
    inst = Instance(
        phi=compression, A=fixed_A, f=constant_fn(1.0), g=constant_fn(1.0), params=ExponentParams(r=0.25)
    )
    result = check_with_isometry("PO1", inst, CheckMode.CONSTRUCTIVE, tol, enforce_hypotheses=False)
    assert result.status is CheckStatus.FAILED
    assert result.gap == pytest.approx(-0.0234, abs=1e-3)


@pytest.mark.parametrize("gamma", [0.5, 1.0])
def test_po1_negative_power_variant_is_skipped(compression, fixed_A, tol, gamma):
    inst = Instance(
        phi=compression, A=fixed_A, f=positive_power(-gamma), g=constant_fn(1.0), params=ExponentParams(r=0.25)
    )
    result = check_with_isometry("PO1", inst, CheckMode.CONSTRUCTIVE, tol)
    assert result.status is CheckStatus.SKIPPED
    assert "fg_over_t_operator_concave" in result.notes[0]


@pytest.mark.parametrize("gamma, status", [(0.5, CheckStatus.FAILED), (1.0, CheckStatus.PASSED)])
def test_po1_negative_power_variant_relaxed(compression, fixed_A, tol, gamma, status):
    inst = Instance(
        phi=compression, A=fixed_A, f=positive_power(-gamma), g=constant_fn(1.0), params=ExponentParams(r=0.25)
    )
    result = check_with_isometry("PO1", inst, CheckMode.CONSTRUCTIVE, tol, enforce_hypotheses=False)
    assert result.status is status
