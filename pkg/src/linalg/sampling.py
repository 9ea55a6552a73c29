"""
Seeded random matrix generators shared by the certifier, the map gallery,
the suite and the explorer.
"""

import zlib
from typing import Optional, Sequence

import numpy as np

from .hermitian import hermitian_part


def trial_rng(seed: int, family: str, trial: int) -> np.random.Generator:
    """Independent generator per (family, trial) so parallel runs match serial runs."""
    sequence = np.random.SeedSequence(seed, spawn_key=(zlib.crc32(family.encode("utf-8")), trial))
    return np.random.default_rng(sequence)


def phase_fixed_qr(z: np.ndarray) -> np.ndarray:
    """Orthonormalize columns with a deterministic phase: diag(R) real positive."""
    q, r = np.linalg.qr(z)
    d = np.diag(r).copy()
    d[np.abs(d) == 0] = 1.0
    return q * (d / np.abs(d))


def random_isometry(n_in: int, n_out: int, rng: np.random.Generator) -> np.ndarray:
    """n_in × n_out matrix V with V*V = I."""
    z = rng.standard_normal((n_in, n_out)) + 1j * rng.standard_normal((n_in, n_out))
    return phase_fixed_qr(z)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    return random_isometry(n, n, rng)


def random_hermitian(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return hermitian_part(z) * scale


def log_uniform(rng: np.random.Generator, lo: float, hi: float, size: int) -> np.ndarray:
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size=size))


def matrix_with_spectrum(eigenvalues: Sequence[float], rng: np.random.Generator) -> np.ndarray:
    """U·diag(λ)·U* for a random unitary U."""
    lam = np.asarray(eigenvalues, dtype=float)
    u = random_unitary(lam.size, rng)
    return hermitian_part((u * lam) @ u.conj().T)


def random_positive(
    n: int,
    rng: np.random.Generator,
    lo: float = 0.1,
    hi: float = 10.0,
    spectrum: Optional[Sequence[float]] = None,
) -> np.ndarray:
    """Positive definite matrix with log-uniform spectrum in [lo, hi]."""
    lam = log_uniform(rng, lo, hi, n) if spectrum is None else spectrum
    return matrix_with_spectrum(lam, rng)


def random_psd(n: int, rng: np.random.Generator, rank_one: bool = False) -> np.ndarray:
    """Positive semidefinite matrix; rank one when requested."""
    if rank_one:
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        return np.outer(x, x.conj())
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return hermitian_part(z @ z.conj().T) / n
