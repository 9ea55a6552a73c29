"""
Kantorovich-type constants for reverse Choi–Davis and Kadison inequalities.

κ(h, p) is evaluated in the form K(1, h, p), i.e. with first factor
(h^p − h)/((p − 1)(h − 1)), so that K(m, M, p) = κ(M/m, p) holds exactly.
Removable singularities at p ∈ {0, 1} and h → 1 are resolved through
expm1-based difference quotients.
"""

import logging
import math
from typing import Literal

import numpy as np

from ..errors import ConstraintViolationError, DomainViolationError
from ..functions.expressions import DeriveKind, ScalarFn, derive
from ..schemas import SpectralBounds
from .optimize import GRID_POINTS, grid_maximize, grid_minimize

logger = logging.getLogger(__name__)

H_ONE_TOL = 1e-8
P_SINGULAR_TOL = 1e-6

Variant = Literal["auto", "printed", "chain"]


def _growth(x: float, log_h: float) -> float:
    """(h^x − 1)/x, continuous at x = 0."""
    if abs(x * log_h) < 1e-8:
        return log_h * (1.0 + 0.5 * x * log_h)
    return math.expm1(x * log_h) / x


def kappa(h: float, p: float) -> float:
    """
    Generalized Kantorovich constant κ(h, p), h ≥ 1.

    Raises:
        ConstraintViolationError: if h < 1
    """
    if abs(h - 1.0) < H_ONE_TOL or p == 0 or p == 1:
        if h < 1 - H_ONE_TOL:
            raise ConstraintViolationError(f"kappa needs h > 1, got {h}")
        return 1.0
    if h < 1:
        raise ConstraintViolationError(f"kappa needs h > 1, got {h}")
    log_h = math.log(h)
    e_p = _growth(p, log_h)
    e_pm1 = _growth(p - 1.0, log_h)
    return h * e_pm1 / (h - 1.0) * (e_p / (h * e_pm1)) ** p


def k_power(bounds: SpectralBounds, p: float) -> float:
    """
    K(m, M, p) from the product formula in m and M.

    Falls back to κ(M/m, p) at the removable singularities p = 1 and p = 0.
    """
    m, M = bounds.m, bounds.M
    if abs(p - 1.0) < P_SINGULAR_TOL or abs(p) < P_SINGULAR_TOL:
        return kappa(bounds.h, p)
    cross = m * M**p - M * m**p
    first = cross / ((p - 1.0) * (M - m))
    return first * ((p - 1.0) / p * (M**p - m**p) / cross) ** p


def _secant_ratio(bounds: SpectralBounds, f: ScalarFn):
    m, M = bounds.m, bounds.M
    fm, fM = f.eval(m), f.eval(M)
    grid = np.linspace(m, M, GRID_POINTS)
    values = f.evaluate(grid)
    if not np.all(np.isfinite(values)) or np.any(values <= 0) or min(fm, fM) <= 0:
        raise DomainViolationError(f"{f.to_text()} must be positive on [{m}, {M}]")

    def ratio(t: np.ndarray) -> np.ndarray:
        return ((M - t) * fm + (t - m) * fM) / ((M - m) * f.evaluate(t))

    return ratio


def k1(bounds: SpectralBounds, f: ScalarFn) -> float:
    """K₁(m, M, f): minimum over [m, M] of the secant-to-function ratio."""
    _, value = grid_minimize(_secant_ratio(bounds, f), bounds.m, bounds.M)
    return value


def k2(bounds: SpectralBounds, f: ScalarFn) -> float:
    """K₂(m, M, f): maximum over [m, M] of the secant-to-function ratio."""
    _, value = grid_maximize(_secant_ratio(bounds, f), bounds.m, bounds.M)
    return value


def value_ratio(bounds: SpectralBounds, f: ScalarFn) -> float:
    """max f / min f over [m, M]; equals f(M)/f(m) for increasing f."""
    grid = np.linspace(bounds.m, bounds.M, GRID_POINTS)
    values = f.evaluate(grid)
    return float(values.max() / values.min())


def k_reverse_theorem(bounds: SpectralBounds, f: ScalarFn) -> float:
    """
    K = κ(ratio, 2)^{1/2} · K₁(m, M, f²)^{-1/2} · K₂(m, M, t·f).

    Reverses |Φ(f(A))Φ(A)| ≥ Φ(A f(A)) up to K when f² is concave on [m, M].
    """
    ratio = value_ratio(bounds, f)
    f_squared = derive(f, DeriveKind.F_SQUARED)
    t_times_f = derive(f, DeriveKind.T_TIMES_F)
    return (
        math.sqrt(kappa(ratio, 2.0))
        / math.sqrt(k1(bounds, f_squared))
        * k2(bounds, t_times_f)
    )


def k_nakamoto(h: float, gamma: float) -> float:
    """κ(h, 1+γ)·κ(h^γ, 2)^{1/2}·κ(h², γ)^{-1/2} for γ ∈ [0, 1]."""
    if not 0 <= gamma <= 1:
        raise ConstraintViolationError(f"gamma must lie in [0, 1], got {gamma}")
    return kappa(h, 1 + gamma) * math.sqrt(kappa(h**gamma, 2.0)) / math.sqrt(kappa(h**2, gamma))


def power_factor(h: float, hi: float, gamma: float, variant: Variant) -> float:
    """
    The factor bounding Φ(A^{hi})² from below by Φ(A^γ)^{2hi/γ}.

    The printed form κ(h^γ, 2hi/γ) needs 2hi/γ ≤ 1; the Kadison chain form
    κ(h^{2γ}, hi/γ) holds on the whole window hi ≤ γ.
    """
    if variant == "auto":
        variant = "printed" if 2 * hi <= gamma else "chain"
    if variant == "printed":
        return kappa(h**gamma, 2 * hi / gamma)
    return kappa(h ** (2 * gamma), hi / gamma)


def factor_variant(hi: float, gamma: float) -> str:
    return "printed" if 2 * hi <= gamma else "chain"


def k_m4(h: float, alpha: float, beta: float, variant: Variant = "auto") -> float:
    """κ(h^β, 1+α/β)·κ(h^β, 2α/β)^{-1/2}·κ(h^α, 2)^{1/2} for 0 ≤ α ≤ β."""
    if not (0 <= alpha <= beta and beta > 0):
        raise ConstraintViolationError(f"M4 needs 0 <= alpha <= beta, beta > 0, got ({alpha}, {beta})")
    return (
        kappa(h**beta, 1 + alpha / beta)
        / math.sqrt(power_factor(h, alpha, beta, variant))
        * math.sqrt(kappa(h**alpha, 2.0))
    )


def check_three_params(alpha: float, beta: float, gamma: float) -> None:
    if min(alpha, beta) < 0 or gamma <= 0:
        raise ConstraintViolationError(f"Exponents must be non-negative with gamma > 0, got ({alpha}, {beta}, {gamma})")
    if min(alpha, beta) > gamma / 2 or max(alpha, beta) > gamma:
        raise ConstraintViolationError(
            f"Need min(alpha, beta) <= gamma/2 and max(alpha, beta) <= gamma, got ({alpha}, {beta}, {gamma})"
        )


def k_three(h: float, alpha: float, beta: float, gamma: float, variant: Variant = "auto") -> float:
    """
    κ(h^α,2)^{1/2} κ(h^β,2)^{1/2} κ(h^γ,2β/γ)^{-1/2} κ(h^γ,2α/γ)^{-1/2} κ(h^γ,1+(α+β)/γ).

    The factor of the larger exponent follows the same printed/chain rule as k_m4,
    so β = 0 reproduces k_m4(h, α, γ).
    """
    check_three_params(alpha, beta, gamma)
    lo, hi = min(alpha, beta), max(alpha, beta)
    return (
        math.sqrt(kappa(h**alpha, 2.0))
        * math.sqrt(kappa(h**beta, 2.0))
        / math.sqrt(kappa(h**gamma, 2 * lo / gamma))
        / math.sqrt(power_factor(h, hi, gamma, variant))
        * kappa(h**gamma, 1 + (alpha + beta) / gamma)
    )
