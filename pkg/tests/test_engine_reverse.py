"""
Reverse checks: constants folded into the sides, equality cases and the
hypotheses that block even when relaxed.
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.constants import k1, k_m4, k_power
from src.engine import check_reverse, sample_instance
from src.engine.instances import gallery_fn
from src.engine.reverse import asa_constant, elh_constant
from src.linalg.sampling import trial_rng
from src.schemas import CheckStatus, ExponentParams, Instance, SpectralBounds

BOUNDS = SpectralBounds(1.0, 4.0)


def scalar(c: float, n: int = 3) -> np.ndarray:
    return c * np.eye(n)


def test_elh_is_an_equality_for_scalars(compression, tol):
    inst = Instance(phi=compression, A=scalar(2.0), B=scalar(1.0), params=ExponentParams(r=0.5))
    result = check_reverse("ELH", inst, tol)
    assert result.passed
    assert result.constant == pytest.approx(math.sqrt(2.0) - 1.0, abs=1e-14)
    assert abs(result.gap) < 1e-12


def test_elh_constant_vanishes_at_r_zero(fixed_A, fixed_B):
    assert elh_constant(fixed_A + 2 * np.eye(3), fixed_B, 0.0) == pytest.approx(0.0, abs=1e-15)


def test_elh_needs_strict_gap(compression, fixed_A, tol):
    inst = Instance(phi=compression, A=fixed_A, B=fixed_A, params=ExponentParams(r=0.5))
    result = check_reverse("ELH", inst, tol)
    assert result.status is CheckStatus.SKIPPED
    assert "strict_gap" in result.notes[0]


def test_omega_gap_vanishes_on_scalars(compression, tol):
    inst = Instance(phi=compression, A=scalar(3.0), params=ExponentParams(r=0.75))
    result = check_reverse("OMEGA_GAP", inst, tol)
    assert result.passed
    assert result.constant == pytest.approx(0.0, abs=1e-12)


def test_omega_gap_outside_window_skips_even_when_relaxed(compression, fixed_A, tol):
    inst = Instance(phi=compression, A=fixed_A, params=ExponentParams(r=0.25))
    result = check_reverse("OMEGA_GAP", inst, tol, enforce_hypotheses=False)
    assert result.status is CheckStatus.SKIPPED


def test_omega_gap_on_trace_map(trace_map, omega_A, tol):
    inst = Instance(phi=trace_map, A=omega_A, params=ExponentParams(r=0.5))
    result = check_reverse("OMEGA_GAP", inst, tol)
    assert result.passed
    assert result.constant > 0


@pytest.mark.parametrize("r", [0.0, 0.5, 1.0])
def test_lemma_asa_is_an_equality_for_scalars(compression, tol, r):
    inst = Instance(phi=compression, A=scalar(3.0), B=scalar(1.0), params=ExponentParams(p=1.0, q=1.0, r=r))
    result = check_reverse("LEMMA_ASA", inst, tol)
    assert result.passed
    assert abs(result.gap) < 1e-10
    assert result.constant == pytest.approx(asa_constant(scalar(3.0), 2.0, 1.0, 1.0, r), rel=1e-12)


def test_lemma_asa_needs_p_at_least_one(compression, tol):
    inst = Instance(phi=compression, A=scalar(2.0), B=scalar(1.0), params=ExponentParams(p=0.25, q=1.0, r=1.0))
    result = check_reverse("LEMMA_ASA", inst, tol)
    assert result.status is CheckStatus.SKIPPED
    assert "exponent_window" in result.notes[0]


def test_lemma_asa_below_p_one_fails_for_scalars(compression, tol):
    inst = Instance(phi=compression, A=scalar(2.0), B=scalar(1.0), params=ExponentParams(p=0.25, q=1.0, r=1.0))
    result = check_reverse("LEMMA_ASA", inst, tol, enforce_hypotheses=False)
    assert result.status is CheckStatus.FAILED
    assert result.gap == pytest.approx(2 ** 0.625 - 2.0, abs=1e-12)


def test_refined_kadison_is_an_equality_at_identity(compression, tol):
    inst = Instance(phi=compression, A=np.eye(3), params=ExponentParams(alpha=1.5, beta=1.0))
    result = check_reverse("THM_MAIN2", inst, tol)
    assert result.passed
    assert result.constant == pytest.approx(0.0, abs=1e-12)
    assert_allclose(result.lhs, result.rhs, atol=1e-12)


def test_refined_kadison_exponent_window(compression, fixed_A, tol):
    inst = Instance(phi=compression, A=fixed_A, params=ExponentParams(alpha=1.0, beta=1.0))
    assert check_reverse("THM_MAIN2", inst, tol, enforce_hypotheses=False).status is CheckStatus.SKIPPED


def test_reverse_jensen_concave_branch(compression, fixed_A, tol):
    f = gallery_fn("pow(t,0.5)")
    inst = Instance(phi=compression, A=fixed_A, f=f, bounds=BOUNDS)
    result = check_reverse("REV_JENSEN", inst, tol)
    assert result.passed
    assert result.constant == pytest.approx(k1(BOUNDS, f), rel=1e-12)
    assert result.notes[0].startswith("concave branch")


def test_reverse_jensen_convex_branch(compression, fixed_A, tol):
    inst = Instance(phi=compression, A=fixed_A, f=gallery_fn("pow(t,2)"), bounds=BOUNDS)
    result = check_reverse("REV_JENSEN", inst, tol)
    assert result.passed
    assert result.notes[0].startswith("convex branch")


@pytest.mark.parametrize("p", [0.5, 2.0, 3.0])
def test_reverse_choi(compression, fixed_A, tol, p):
    inst = Instance(phi=compression, A=fixed_A, bounds=BOUNDS, params=ExponentParams(p=p))
    result = check_reverse("REV_CHOI", inst, tol)
    assert result.passed
    assert result.constant == pytest.approx(k_power(BOUNDS, p), rel=1e-12)


def test_reverse_choi_without_bounds_skips_even_when_relaxed(compression, fixed_A, tol):
    inst = Instance(phi=compression, A=fixed_A, params=ExponentParams(p=2.0))
    result = check_reverse("REV_CHOI", inst, tol, enforce_hypotheses=False)
    assert result.status is CheckStatus.SKIPPED
    assert "bounds_given" in result.notes[0]


def test_m4_with_zero_exponent_has_unit_constant(compression, fixed_A, tol):
    inst = Instance(phi=compression, A=fixed_A, bounds=BOUNDS, params=ExponentParams(alpha=0.0, beta=0.7))
    result = check_reverse("M4", inst, tol)
    assert result.passed
    assert result.constant == pytest.approx(k_m4(4.0, 0.0, 0.7), abs=1e-12)
    assert result.constant == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize(
    "family",
    ["REV_JENSEN", "REV_CHOI", "THM_REVERSE_F", "COR_NAKAMOTO", "M4", "ELH", "OMEGA_GAP", "LEMMA_ASA", "THM_MAIN2", "COR_LC"],
)
def test_gallery_instances_pass(family, tol):
    for trial in range(4):
        inst = sample_instance(family, 3, trial_rng(5, family, trial))
        result = check_reverse(family, inst, tol)
        assert result.status is not CheckStatus.FAILED, (trial, result.gap, result.notes)


def test_rejects_other_family_kinds(compression, fixed_A, tol):
    with pytest.raises(ValueError, match="not a reverse family"):
        check_reverse("ASY", Instance(phi=compression, A=fixed_A), tol)
