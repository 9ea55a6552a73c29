"""Kantorovich-type constants and the ω refinement term."""

from .kantorovich import (
    factor_variant,
    k1,
    k2,
    k_m4,
    k_nakamoto,
    k_power,
    k_reverse_theorem,
    k_three,
    kappa,
    power_factor,
)
from .omega import omega

__all__ = [
    "factor_variant",
    "k1",
    "k2",
    "k_m4",
    "k_nakamoto",
    "k_power",
    "k_reverse_theorem",
    "k_three",
    "kappa",
    "omega",
    "power_factor",
]
