"""
Direct Löwner checkers: orientation, hypothesis gating and conjecture notes.
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.engine import check_inequality, refutation_instance
from src.engine.instances import gallery_fn
from src.errors import ConfigError, ConstraintViolationError
from src.linalg import mpower
from src.schemas import CheckStatus, ExponentParams, HypothesisState, Instance


def test_kadison_is_tight_on_compression(compression, fixed_A, tol):
    result = check_inequality("KADISON", Instance(phi=compression, A=fixed_A), tol)
    assert result.passed
    assert_allclose(result.lhs, 4.0 * np.eye(2), atol=1e-12)
    assert_allclose(result.rhs, [[4.0, 0.0], [0.0, 5.0]], atol=1e-12)
    assert abs(result.gap) < 1e-12


def test_kadison_accepts_indefinite_hermitian(compression, tol):
    A = np.array([[1.0, 2.0, 0.0], [2.0, -3.0, 1.0], [0.0, 1.0, 0.5]])
    assert check_inequality("KADISON", Instance(phi=compression, A=A), tol).passed


def test_power_cd_swaps_orientation_in_concave_window(compression, fixed_A, tol):
    inst = Instance(phi=compression, A=fixed_A, params=ExponentParams(p=0.5))
    result = check_inequality("POWER_CD", inst, tol)
    assert result.passed
    assert_allclose(result.lhs, compression(mpower(fixed_A, 0.5)), atol=1e-12)
    assert any("concave window" in note for note in result.notes)


@pytest.mark.parametrize("p", [-1.0, -0.5, 1.5, 2.0])
def test_power_cd_convex_window(compression, fixed_A, tol, p):
    inst = Instance(phi=compression, A=fixed_A, params=ExponentParams(p=p))
    result = check_inequality("POWER_CD", inst, tol)
    assert result.passed
    assert_allclose(result.lhs, mpower(compression(fixed_A), p), atol=1e-12)


def test_power_cd_outside_window_is_skipped(compression, fixed_A, tol):
    inst = Instance(phi=compression, A=fixed_A, params=ExponentParams(p=3.0))
    result = check_inequality("POWER_CD", inst, tol)
    assert result.status is CheckStatus.SKIPPED
    assert result.lhs is None
    assert result.notes == ["hypothesis failed: exponent_window"]


def test_relaxed_hypotheses_evaluate_the_raw_inequality(compression, fixed_A, tol):
    inst = Instance(phi=compression, A=fixed_A, params=ExponentParams(p=3.0))
    result = check_inequality("POWER_CD", inst, tol, enforce_hypotheses=False)
    assert result.status is not CheckStatus.SKIPPED
    assert result.hypotheses[0].state is HypothesisState.FAILS


def test_missing_parameter_raises(compression, fixed_A, tol):
    with pytest.raises(ConstraintViolationError):
        check_inequality("ASY", Instance(phi=compression, A=fixed_A), tol)


@pytest.mark.parametrize("gamma", [0.0, 0.3, 0.5, 1.0])
def test_asymmetric_kadison(compression, fixed_A, tol, gamma):
    inst = Instance(phi=compression, A=fixed_A, params=ExponentParams(gamma=gamma))
    assert check_inequality("ASY", inst, tol).passed


def test_chda_with_operator_convex_square(compression, fixed_A, tol):
    inst = Instance(phi=compression, A=fixed_A, f=gallery_fn("pow(t,2)"))
    result = check_inequality("CHDA", inst, tol)
    assert result.passed
    assert [h.name for h in result.hypotheses] == ["spectrum_in_domain", "f_operator_convex"]


def test_chda_without_function_is_skipped_even_when_relaxed(compression, fixed_A, tol):
    result = check_inequality("CHDA", Instance(phi=compression, A=fixed_A), tol, enforce_hypotheses=False)
    assert result.status is CheckStatus.SKIPPED


def test_default_perspective(compression, fixed_A, fixed_B, tol):
    inst = Instance(phi=compression, A=fixed_A, B=fixed_B)
    assert check_inequality("PERSPECTIVE", inst, tol).passed


def test_cor_gamma_reports_both_links(compression, fixed_A, tol):
    inst = Instance(phi=compression, A=fixed_A, params=ExponentParams(gamma=0.25))
    result = check_inequality("COR_GAMMA", inst, tol)
    assert result.passed
    assert len(result.chain_gaps) == 2
    assert len(result.chain_labels) == 2


def test_unitary_dominance_on_commuting_pair(compression, tol):
    A = np.diag([1.0, 2.0, 3.0])
    B = np.diag([1.0, 4.0, 9.0])
    assert check_inequality("BR_UNITARY_DOMINANCE", Instance(phi=compression, A=A, B=B), tol).passed


def test_unitary_dominance_needs_comonotone_pair(compression, fixed_A, fixed_B, tol):
    result = check_inequality("BR_UNITARY_DOMINANCE", Instance(phi=compression, A=fixed_A, B=fixed_B), tol)
    assert result.status is CheckStatus.SKIPPED
    assert "comonotone_pair" in result.notes[0]


def test_scalar_chebyshev_similarly_ordered(compression, tol):
    inst = Instance(phi=compression, A=np.diag([1.0, 2.0, 3.0]), B=np.diag([1.0, 2.0, 3.0]))
    result = check_inequality("SCALAR_CHEBYSHEV", inst, tol)
    assert result.passed
    assert result.gap == pytest.approx(2.0 / 3.0, abs=1e-12)


def test_scalar_chebyshev_oppositely_ordered_reverses(compression, tol):
    inst = Instance(phi=compression, A=np.diag([1.0, 2.0, 3.0]), B=np.diag([3.0, 2.0, 1.0]))
    result = check_inequality("SCALAR_CHEBYSHEV", inst, tol)
    assert result.passed
    assert result.gap == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert any("oppositely ordered" in note for note in result.notes)


@pytest.mark.parametrize("family", ["CH_OP1", "CH_OP2"])
def test_chebyshev_conjectures_fail_on_fixed_instance(family, tol):
    result = check_inequality(family, refutation_instance(), tol)
    assert result.status is CheckStatus.FAILED
    assert result.gap < -1e-3
    assert any("conjecture family" in note for note in result.notes)


def test_non_direct_family_raises(compression, fixed_A, tol):
    with pytest.raises(ValueError, match="not a direct family"):
        check_inequality("ELH", Instance(phi=compression, A=fixed_A), tol)


def test_unknown_family_raises(compression, fixed_A, tol):
    with pytest.raises(ConfigError):
        check_inequality("NOT_A_FAMILY", Instance(phi=compression, A=fixed_A), tol)


def test_family_names_are_case_insensitive(compression, fixed_A, tol):
    assert check_inequality("kadison", Instance(phi=compression, A=fixed_A), tol).family == "KADISON"


def test_asymmetric_kadison_at_zero_exponent_is_an_equality(compression, fixed_A, tol):
    inst = Instance(phi=compression, A=fixed_A, params=ExponentParams(gamma=0.0))
    result = check_inequality("ASY", inst, tol)
    assert_allclose(result.lhs, compression(fixed_A), atol=1e-12)
    assert_allclose(result.rhs, compression(fixed_A), atol=1e-12)
