"""
Dense complex linear algebra for small matrices.

Eigenvalues come from cyclic complex Jacobi rotations by default; setting
VERIFIER_EIG_SOLVER=lapack (or a suite profile, through using_eig_solver)
routes through numpy's LAPACK driver instead.
"""

import logging
import math
from contextlib import contextmanager
from typing import TYPE_CHECKING, Callable, Iterator, Optional

import numpy as np

from ..config import get_settings
from ..errors import (
    ConfigError,
    ConvergenceError,
    DimensionMismatchError,
    DomainViolationError,
    SingularOperandError,
)
from ..schemas import OrderVerdict, PolarParts, Spectrum, ToleranceConfig

if TYPE_CHECKING:
    from ..functions.expressions import ScalarFn

logger = logging.getLogger(__name__)

HERM_TOL = 1e-12
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 64
RANK_TOL = 1e-10
DOMAIN_MARGIN = 1e-9
SINGULAR_EIG = 1e-12
EIG_SOLVERS = ("jacobi", "lapack")

_solver_override: Optional[str] = None


def as_matrix(x: np.ndarray) -> np.ndarray:
    """Coerce to a finite 2-D complex array."""
    a = np.asarray(x, dtype=complex)
    if a.ndim != 2:
        raise DimensionMismatchError(f"Expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainViolationError("Matrix has non-finite entries")
    return a


def as_hermitian(x: np.ndarray, herm_tol: float = HERM_TOL) -> np.ndarray:
    """Validate Hermitian symmetry within herm_tol·‖X‖_F and symmetrize."""
    a = as_matrix(x)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"Hermitian matrix must be square, got {a.shape}")
    skew = np.linalg.norm(a - a.conj().T)
    if skew > herm_tol * max(np.linalg.norm(a), np.finfo(float).tiny):
        raise DomainViolationError(f"Matrix is not Hermitian (‖X − X*‖_F = {skew:.3e})")
    return 0.5 * (a + a.conj().T)


def hermitian_part(x: np.ndarray) -> np.ndarray:
    """Symmetrize without validation; for products that are Hermitian in exact arithmetic."""
    a = as_matrix(x)
    return 0.5 * (a + a.conj().T)


def _off_diagonal_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _jacobi_eigh(a: np.ndarray) -> Spectrum:
    a = a.copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    threshold = JACOBI_TOL * np.linalg.norm(a)

    if n > 1 and threshold > 0:
        for _ in range(JACOBI_MAX_SWEEPS):
            if _off_diagonal_norm(a) <= threshold:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    magnitude = abs(apq)
                    if magnitude == 0.0:
                        continue
                    theta = 0.5 * math.atan2(2.0 * magnitude, (a[q, q] - a[p, p]).real)
                    c, s = math.cos(theta), math.sin(theta)
                    phase = np.conj(apq) / magnitude
                    rotation = np.array([[c, s], [-s * phase, c * phase]])
                    idx = [p, q]
                    a[:, idx] = a[:, idx] @ rotation
                    a[idx, :] = rotation.conj().T @ a[idx, :]
                    a[p, q] = a[q, p] = 0.0
                    a[p, p] = a[p, p].real
                    a[q, q] = a[q, q].real
                    v[:, idx] = v[:, idx] @ rotation
        else:
            if _off_diagonal_norm(a) > threshold:
                raise ConvergenceError(
                    f"Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps"
                )

    eigenvalues = np.diag(a).real.copy()
    order = np.argsort(eigenvalues, kind="stable")
    return Spectrum(eigenvalues=eigenvalues[order], eigenvectors=v[:, order])


def active_eig_solver() -> str:
    return _solver_override or get_settings().eig_solver


@contextmanager
def using_eig_solver(solver: Optional[str]) -> Iterator[None]:
    """Route eig_hermitian through one solver for the duration of a run; None keeps the setting."""
    global _solver_override
    if solver is not None and solver not in EIG_SOLVERS:
        raise ConfigError(f"eig solver must be one of {EIG_SOLVERS}, got {solver!r}")
    previous = _solver_override
    _solver_override = solver or previous
    try:
        yield
    finally:
        _solver_override = previous


def eig_hermitian(A: np.ndarray) -> Spectrum:
    """
    Eigendecomposition of a Hermitian matrix.

    Returns:
        Spectrum with ascending eigenvalues and unitary eigenvector columns

    Raises:
        ConvergenceError: if the Jacobi sweeps hit their cap
    """
    a = as_hermitian(A)
    if active_eig_solver() == "lapack":
        w, u = np.linalg.eigh(a)
        return Spectrum(eigenvalues=w, eigenvectors=u)
    return _jacobi_eigh(a)


def eigvals_hermitian(A: np.ndarray) -> np.ndarray:
    return eig_hermitian(A).eigenvalues


def spectral_map(
    A: np.ndarray, fn: Callable[[np.ndarray], np.ndarray], spectrum: Optional[Spectrum] = None
) -> np.ndarray:
    """U·diag(fn(λ))·U* for Hermitian A."""
    spec = spectrum or eig_hermitian(A)
    u = spec.eigenvectors
    values = np.asarray(fn(spec.eigenvalues), dtype=float)
    return hermitian_part((u * values) @ u.conj().T)


def apply_scalar_function(A: np.ndarray, f: "ScalarFn") -> np.ndarray:
    """
    f(A) through spectral calculus.

    Eigenvalues within the domain margin of a closed endpoint are clamped onto it.

    Raises:
        DomainViolationError: if an eigenvalue lies outside f's interval
    """
    spec = eig_hermitian(A)
    lam = spec.eigenvalues
    slack = DOMAIN_MARGIN * max(1.0, float(np.max(np.abs(lam))) if lam.size else 1.0)
    clamped = f.domain.clamp(lam, slack)
    if clamped is None:
        raise DomainViolationError(
            f"Spectrum [{lam.min():.6g}, {lam.max():.6g}] leaves the domain {f.domain} of {f.to_text()}"
        )
    return spectral_map(A, lambda _: f.evaluate(clamped), spectrum=spec)


def mpower(A: np.ndarray, p: float) -> np.ndarray:
    """A^p for positive A; negative powers refuse near-singular operands."""
    spec = eig_hermitian(A)
    lam = spec.eigenvalues
    scale = max(1.0, float(np.max(np.abs(lam))))
    if p == 0:
        return np.eye(A.shape[0], dtype=complex)
    if float(p).is_integer() and p > 0:
        return spectral_map(A, lambda w: w ** int(p), spectrum=spec)
    if p < 0:
        if lam.min() <= SINGULAR_EIG:
            raise SingularOperandError(
                f"Negative power {p} needs λ_min > {SINGULAR_EIG}, got {lam.min():.3e}"
            )
        return spectral_map(A, lambda w: np.power(w, p), spectrum=spec)
    if lam.min() < -DOMAIN_MARGIN * scale:
        raise DomainViolationError(f"Fractional power {p} of a non-positive matrix")
    return spectral_map(A, lambda w: np.power(np.clip(w, 0.0, None), p), spectrum=spec)


def inv_positive(A: np.ndarray) -> np.ndarray:
    return mpower(A, -1.0)


def sqrt_positive(A: np.ndarray) -> np.ndarray:
    return mpower(A, 0.5)


def min_eig(X: np.ndarray) -> float:
    return float(eigvals_hermitian(X)[0])


def max_eig(X: np.ndarray) -> float:
    return float(eigvals_hermitian(X)[-1])


def operator_norm(X: np.ndarray) -> float:
    """Spectral norm: largest singular value."""
    a = as_matrix(X)
    if a.shape[0] == a.shape[1] and np.allclose(a, a.conj().T, rtol=0, atol=HERM_TOL * max(1.0, np.linalg.norm(a))):
        lam = eigvals_hermitian(hermitian_part(a))
        return float(max(abs(lam[0]), abs(lam[-1])))
    gram = eigvals_hermitian(hermitian_part(a.conj().T @ a))
    return float(math.sqrt(max(gram[-1], 0.0)))


def loewner_leq(
    X: np.ndarray, Y: np.ndarray, tol: Optional[ToleranceConfig] = None
) -> OrderVerdict:
    """Decide X ≤ Y: λ_min(Y − X) ≥ −(atol + rtol·max(‖X‖₂, ‖Y‖₂))."""
    tol = tol or get_settings().tolerance
    x, y = as_hermitian(X), as_hermitian(Y)
    if x.shape != y.shape:
        raise DimensionMismatchError(f"Cannot compare {x.shape} with {y.shape}")
    bound = tol.bound(max(operator_norm(x), operator_norm(y)))
    gap = min_eig(y - x)
    return OrderVerdict(holds=gap >= -bound, gap_min_eig=gap, tolerance_used=bound)


def abs_op(X: np.ndarray) -> np.ndarray:
    """|X| = (X*X)^{1/2}."""
    a = as_matrix(X)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"abs_op expects a square matrix, got {a.shape}")
    return spectral_map(hermitian_part(a.conj().T @ a), lambda w: np.sqrt(np.clip(w, 0.0, None)))


def _fix_phase(b: np.ndarray) -> complex:
    k = int(np.argmax(np.abs(b)))
    if abs(b[k]) == 0.0:
        return 1.0 + 0.0j
    return np.conj(b[k]) / abs(b[k])


def polar(X: np.ndarray) -> PolarParts:
    """
    Polar decomposition X = W|X| with W a partial isometry.

    Singular triplets come from the Hermitian dilation [[0, X], [X*, 0]], whose
    eigenpairs (±σ, (u; ±v)/√2) keep small singular values accurate. The support
    is {σ > RANK_TOL·σ_max}; singular vectors are phase-fixed so their
    largest-modulus entry is real positive.
    """
    a = as_matrix(X)
    n = a.shape[0]
    if a.shape[1] != n:
        raise DimensionMismatchError(f"polar expects a square matrix, got {a.shape}")

    dilation = np.zeros((2 * n, 2 * n), dtype=complex)
    dilation[:n, n:] = a
    dilation[n:, :n] = a.conj().T
    spec = eig_hermitian(dilation)

    sigma = np.clip(spec.eigenvalues[n:][::-1], 0.0, None)
    vectors = spec.eigenvectors[:, n:][:, ::-1]
    left = np.sqrt(2.0) * vectors[:n, :]
    right = np.sqrt(2.0) * vectors[n:, :]

    sigma_max = float(sigma[0]) if n else 0.0
    rank = int(np.sum(sigma > RANK_TOL * sigma_max)) if sigma_max > 0 else 0

    isometry = np.zeros((n, n), dtype=complex)
    modulus = np.zeros((n, n), dtype=complex)
    for i in range(rank):
        phase = _fix_phase(right[:, i])
        u = left[:, i] * phase
        v = right[:, i] * phase
        u = u / np.linalg.norm(u)
        v = v / np.linalg.norm(v)
        isometry += np.outer(u, v.conj())
        modulus += sigma[i] * np.outer(v, v.conj())
    return PolarParts(isometry=isometry, modulus=hermitian_part(modulus), rank=rank)


def conjugator_for_adjoint(S: np.ndarray) -> PolarParts:
    """
    Partial isometry W with |S| = W*·|S*|·W.

    With S = W|S| one has |S*| = W|S|W*, so the polar isometry of S works; on
    singular S the identity holds on the support of |S|.
    """
    return polar(S)


def spectral_dominance(
    X: np.ndarray, Y: np.ndarray, tol: Optional[ToleranceConfig] = None
) -> OrderVerdict:
    """
    Decide λ_k(X) ≤ λ_k(Y) for every k (both sorted descending).

    Equivalent to the existence of a unitary V with X ≤ V·Y·V*.
    """
    tol = tol or get_settings().tolerance
    x, y = as_hermitian(X), as_hermitian(Y)
    if x.shape != y.shape:
        raise DimensionMismatchError(f"Cannot compare {x.shape} with {y.shape}")
    lx = eigvals_hermitian(x)[::-1]
    ly = eigvals_hermitian(y)[::-1]
    bound = tol.bound(float(max(abs(lx).max(), abs(ly).max())))
    gap = float(np.min(ly - lx))
    return OrderVerdict(holds=gap >= -bound, gap_min_eig=gap, tolerance_used=bound)


def is_positive_definite(A: np.ndarray, floor: float = SINGULAR_EIG) -> bool:
    return min_eig(A) > floor
