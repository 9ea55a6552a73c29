"""Scalar functions and their numerical operator-property certification."""

from .certify import certify, lfmps_crosscheck, scalar_shape
from .expressions import (
    DeriveKind,
    Interval,
    ScalarFn,
    constant_fn,
    derive,
    identity_fn,
    parse_scalar_fn,
    power_fn,
    shifted_power_fn,
)

__all__ = [
    "DeriveKind",
    "Interval",
    "ScalarFn",
    "certify",
    "constant_fn",
    "derive",
    "identity_fn",
    "lfmps_crosscheck",
    "parse_scalar_fn",
    "power_fn",
    "scalar_shape",
    "shifted_power_fn",
]
