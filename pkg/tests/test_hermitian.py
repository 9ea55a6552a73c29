"""
Tests for the Hermitian core: eigensolver, spectral calculus, order checks, polar parts.
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.config import get_settings
from src.errors import ConfigError, ConvergenceError, DimensionMismatchError, DomainViolationError, SingularOperandError
from src.functions import power_fn
from src.linalg import (
    abs_op,
    apply_scalar_function,
    as_hermitian,
    conjugator_for_adjoint,
    eig_hermitian,
    loewner_leq,
    matrix_from_json,
    matrix_to_json,
    min_eig,
    mpower,
    operator_norm,
    polar,
    spectral_dominance,
    using_eig_solver,
)
from src.linalg import hermitian as hermitian_module
from src.linalg.sampling import random_hermitian, random_positive


def test_eigenvalues_of_reference_matrix():
    spec = eig_hermitian(np.array([[2.0, 1.0], [1.0, 4.0]]))
    assert_allclose(spec.eigenvalues, [3 - math.sqrt(2), 3 + math.sqrt(2)], rtol=0, atol=1e-12)


def test_eigenvalues_ascending_with_unitary_vectors(rng):
    A = random_hermitian(6, rng)
    spec = eig_hermitian(A)
    assert np.all(np.diff(spec.eigenvalues) >= 0)
    U = spec.eigenvectors
    assert_allclose(U.conj().T @ U, np.eye(6), atol=1e-12)


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_reconstruction_of_random_hermitian_matrices(n):
    rng = np.random.default_rng(n)
    for _ in range(125):
        A = random_hermitian(n, rng, scale=float(rng.uniform(0.1, 10.0)))
        spec = eig_hermitian(A)
        U = spec.eigenvectors
        rebuilt = (U * spec.eigenvalues) @ U.conj().T
        assert np.linalg.norm(rebuilt - A) <= 1e-11 * np.linalg.norm(A)


def test_lapack_solver_agrees_with_jacobi(monkeypatch, rng):
    A = random_hermitian(5, rng)
    jacobi = eig_hermitian(A).eigenvalues
    monkeypatch.setenv("VERIFIER_EIG_SOLVER", "lapack")
    get_settings.cache_clear()
    assert_allclose(eig_hermitian(A).eigenvalues, jacobi, atol=1e-12)


def test_sweep_cap_raises_convergence_error(monkeypatch):
    monkeypatch.setattr(hermitian_module, "JACOBI_MAX_SWEEPS", 0)
    with pytest.raises(ConvergenceError):
        eig_hermitian(np.array([[2.0, 1.0], [1.0, 4.0]]))


def test_non_hermitian_input_is_rejected():
    with pytest.raises(DomainViolationError):
        as_hermitian(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(DimensionMismatchError):
        as_hermitian(np.ones((2, 3)))


def test_fractional_power_squares_back(rng):
    A = random_positive(4, rng, 0.5, 5.0)
    root = mpower(A, 0.5)
    assert_allclose(root @ root, A, atol=1e-11)
    assert_allclose(mpower(A, -1.0) @ A, np.eye(4), atol=1e-10)


def test_negative_power_of_singular_matrix():
    with pytest.raises(SingularOperandError):
        mpower(np.diag([1.0, 0.0]), -0.5)


def test_scalar_function_outside_domain():
    with pytest.raises(DomainViolationError):
        apply_scalar_function(np.diag([1.0, -1.0]), power_fn(0.5))


def test_loewner_order_gap_and_direction():
    verdict = loewner_leq(np.eye(2), 2 * np.eye(2))
    assert verdict.holds
    assert verdict.gap_min_eig == pytest.approx(1.0, abs=1e-12)
    reverse = loewner_leq(2 * np.eye(2), np.eye(2))
    assert not reverse.holds
    assert reverse.gap_min_eig == pytest.approx(-1.0, abs=1e-12)


def test_loewner_tolerance_absorbs_roundoff(tol):
    A = np.diag([1.0, 2.0])
    assert loewner_leq(A + 1e-12 * np.eye(2), A, tol).holds
    assert not loewner_leq(A + 1e-6 * np.eye(2), A, tol).holds


def test_polar_decomposition_recovers_matrix(rng):
    X = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    parts = polar(X)
    assert parts.rank == 4
    assert_allclose(parts.isometry @ parts.modulus, X, atol=1e-10)
    assert_allclose(parts.modulus, abs_op(X), atol=1e-10)
    assert_allclose(parts.isometry.conj().T @ parts.isometry, np.eye(4), atol=1e-10)


def test_polar_of_singular_matrix_is_partial_isometry():
    X = np.array([[1.0, 2.0], [2.0, 4.0]])
    parts = polar(X)
    assert parts.rank == 1
    W = parts.isometry
    projection = W.conj().T @ W
    assert_allclose(projection @ projection, projection, atol=1e-12)
    assert_allclose(W @ parts.modulus, X, atol=1e-10)


def test_conjugator_relates_both_absolute_values(rng):
    S = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    W = conjugator_for_adjoint(S).isometry
    assert_allclose(W.conj().T @ abs_op(S.conj().T) @ W, abs_op(S), atol=1e-10)


def test_operator_norm_of_non_hermitian_matrix():
    X = np.array([[0.0, 3.0], [0.0, 0.0]])
    assert operator_norm(X) == pytest.approx(3.0, abs=1e-12)


def test_operator_norm_of_tiny_nearly_hermitian_residual():
    X = np.array([[1e-16, 1e-17], [1.7e-17, 2e-16]])
    assert operator_norm(X) == pytest.approx(2.02e-16, rel=2e-2)


def test_eig_solver_context_routes_and_restores(monkeypatch, rng):
    A = random_hermitian(4, rng)

    def no_jacobi(a):
        raise AssertionError("Jacobi solver used")

    monkeypatch.setattr(hermitian_module, "_jacobi_eigh", no_jacobi)
    with using_eig_solver("lapack"):
        assert eig_hermitian(A).eigenvalues.shape == (4,)
    with using_eig_solver(None), pytest.raises(AssertionError):
        eig_hermitian(A)


def test_eig_solver_context_rejects_unknown_solver():
    with pytest.raises(ConfigError):
        with using_eig_solver("qr"):
            pass


def _rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def test_spectral_dominance_matches_brute_force_rotation_search():
    rng = np.random.default_rng(11)
    angles = np.linspace(0.0, np.pi, 1801)
    rotations = np.stack([_rotation(a) for a in angles])
    compared = 0
    while compared < 100:
        X = random_hermitian(2, rng).real
        Y = random_hermitian(2, rng).real
        verdict = spectral_dominance(X, Y)
        if abs(verdict.gap_min_eig) < 0.05:
            continue
        conjugated = rotations @ Y @ rotations.transpose(0, 2, 1)
        brute = np.linalg.eigvalsh(conjugated - X)[:, 0].max() >= 0
        assert verdict.holds == brute
        compared += 1


def test_dominance_is_weaker_than_loewner_order():
    X = np.diag([1.0, 0.0])
    Y = np.diag([0.0, 2.0])
    assert not loewner_leq(X, Y).holds
    assert spectral_dominance(X, Y).holds


def test_matrix_json_keeps_complex_entries():
    X = np.array([[1.0, 2 - 1j], [2 + 1j, 3.0]])
    data = matrix_to_json(X)
    assert data["n"] == 2
    assert data["entries"][0][1] == [2.0, -1.0]
    assert_allclose(matrix_from_json(data), X)


def test_matrix_json_rejects_bad_shapes():
    with pytest.raises(DimensionMismatchError):
        matrix_from_json({"n": 2, "entries": [[[1, 0], [0, 0]]]})
    with pytest.raises(DomainViolationError):
        matrix_from_json({"n": 1, "entries": [[[float("nan"), 0]]]})


def test_min_eig_of_difference(omega_A):
    assert min_eig(omega_A - np.eye(2)) == pytest.approx(2 - math.sqrt(2), abs=1e-12)
