"""
Tests for Kantorovich-type constants, the optimizer behind K₁/K₂ and ω.
"""

import math

import numpy as np
import pytest

from src.constants import (
    factor_variant,
    k1,
    k2,
    k_m4,
    k_nakamoto,
    k_power,
    k_reverse_theorem,
    k_three,
    kappa,
    omega,
)
from src.constants.optimize import grid_maximize, grid_minimize, gss
from src.errors import ConstraintViolationError, DomainViolationError, SingularOperandError
from src.functions import parse_scalar_fn, power_fn
from src.functions.expressions import POSITIVE
from src.schemas import SpectralBounds


def test_k_power_reference_value():
    assert k_power(SpectralBounds(1.0, 2.0), 2.0) == pytest.approx(1.125, abs=1e-12)


@pytest.mark.parametrize("h, p, expected", [(2.0, 2.0, 1.125), (4.0, 2.0, 25 / 16), (9.0, 2.0, 100 / 36)])
def test_kappa_matches_classical_constant(h, p, expected):
    assert kappa(h, p) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("m", [0.5, 1.0, 3.0])
@pytest.mark.parametrize("h", [1.5, 2.0, 4.0, 10.0])
@pytest.mark.parametrize("p", [-1.0, -0.5, 0.5, 1.5, 2.0, 3.0])
def test_kappa_agrees_with_bounds_form(m, h, p):
    assert k_power(SpectralBounds(m, m * h), p) == pytest.approx(kappa(h, p), rel=1e-12)


@pytest.mark.parametrize("h", [1.0, 2.0, 7.5])
def test_kappa_removable_singularities(h):
    assert kappa(h, 0.0) == 1.0
    assert kappa(h, 1.0) == 1.0
    assert kappa(h, 1.0 + 1e-9) == pytest.approx(1.0, abs=1e-8)
    assert kappa(1.0 + 1e-12, 2.0) == pytest.approx(1.0, abs=1e-8)


def test_kappa_rejects_ratio_below_one():
    with pytest.raises(ConstraintViolationError):
        kappa(0.5, 2.0)


def test_kappa_orders_around_one():
    assert kappa(5.0, 0.5) <= 1.0
    assert kappa(5.0, 2.0) >= 1.0
    assert kappa(5.0, -1.0) >= 1.0


def test_k1_of_square_root():
    assert k1(SpectralBounds(1.0, 4.0), power_fn(0.5)) == pytest.approx(4 / (3 * math.sqrt(2)), abs=1e-9)


def test_k2_of_square():
    assert k2(SpectralBounds(1.0, 2.0), power_fn(2.0)) == pytest.approx(9 / 8, abs=1e-9)


def test_reverse_constants_bracket_one():
    bounds = SpectralBounds(0.3, 5.0)
    for text in ("pow(t,0.5)", "pow(t,2)", "pow(t,-1)", "pow(add(t,1),0.5)"):
        f = parse_scalar_fn(text, POSITIVE)
        assert k1(bounds, f) <= 1.0 + 1e-12
        assert k2(bounds, f) >= 1.0 - 1e-12


def test_reverse_constants_need_positive_function():
    with pytest.raises(DomainViolationError):
        k1(SpectralBounds(1.0, 4.0), parse_scalar_fn("sub(t,2)"))


def test_golden_section_brackets_minimum():
    a, b = gss(lambda t: (t - 0.3) ** 2, 0.0, 1.0, 1e-10)
    assert b - a <= 1e-10
    assert a - 1e-12 <= 0.3 <= b + 1e-12


def test_grid_search_refines_interior_extremum():
    t, value = grid_minimize(lambda x: (x - 1 / 3) ** 2 + 1.0, 0.0, 1.0)
    assert t == pytest.approx(1 / 3, abs=1e-6)
    assert value == pytest.approx(1.0, abs=1e-12)
    t, value = grid_maximize(lambda x: np.sin(x), 0.0, 3.0)
    assert t == pytest.approx(math.pi / 2, abs=1e-6)
    assert value == pytest.approx(1.0, abs=1e-12)


def test_composite_constants_are_at_least_one():
    rng = np.random.default_rng(99)
    for _ in range(200):
        h = float(rng.uniform(1.0, 20.0))
        gamma = float(rng.uniform(0.01, 1.0))
        alpha, beta = sorted(rng.uniform(0.0, 1.0, 2))
        lo = float(rng.uniform(0.0, gamma / 2))
        hi = float(rng.uniform(0.0, gamma))
        assert k_nakamoto(h, gamma) >= 1.0 - 1e-12
        assert k_m4(h, float(alpha), float(beta) + 0.01) >= 1.0 - 1e-12
        assert k_three(h, lo, hi, gamma) >= 1.0 - 1e-12


def test_reverse_theorem_constant_is_at_least_one():
    for text in ("pow(t,0.1)", "pow(t,0.25)", "pow(t,0.4)"):
        f = parse_scalar_fn(text, POSITIVE)
        assert k_reverse_theorem(SpectralBounds(0.5, 6.0), f) >= 1.0 - 1e-12


def test_composite_constants_degenerate_cases():
    assert k_nakamoto(3.0, 0.0) == pytest.approx(1.0, abs=1e-12)
    assert k_m4(3.0, 0.0, 0.7) == pytest.approx(1.0, abs=1e-12)
    assert k_three(4.0, 0.3, 0.0, 0.8) == pytest.approx(k_m4(4.0, 0.3, 0.8), rel=1e-12)
    assert k_m4(1.0, 0.2, 0.6) == pytest.approx(1.0, abs=1e-12)


def test_factor_variant_switches_at_half():
    assert factor_variant(0.2, 0.5) == "printed"
    assert factor_variant(0.4, 0.5) == "chain"
    assert k_m4(5.0, 0.2, 0.5, "printed") == pytest.approx(k_m4(5.0, 0.2, 0.5), rel=1e-14)
    assert k_m4(5.0, 0.4, 0.5, "chain") == pytest.approx(k_m4(5.0, 0.4, 0.5), rel=1e-14)


def test_composite_parameter_windows():
    with pytest.raises(ConstraintViolationError):
        k_nakamoto(2.0, 1.5)
    with pytest.raises(ConstraintViolationError):
        k_m4(2.0, 0.8, 0.5)
    with pytest.raises(ConstraintViolationError):
        k_three(2.0, 0.6, 0.7, 1.0)


def test_omega_reference_example(trace_map, omega_A):
    result = omega(trace_map, omega_A, 0.5)
    assert result.infimum == pytest.approx(0.1772, abs=0.005)
    assert result.infimum == pytest.approx(1.5 - math.sqrt(7) / 2, abs=1e-12)
    assert result.value == pytest.approx(math.sqrt(3) - math.sqrt(3 - result.infimum), abs=1e-12)


def test_omega_sequence_tail_decreases_to_infimum(trace_map, omega_A):
    result = omega(trace_map, omega_A, 0.5)
    tail = result.sequence_tail
    assert len(tail) == 11
    assert all(later <= earlier + 1e-15 for earlier, later in zip(tail, tail[1:]))
    assert abs(tail[-1] - result.infimum) <= 1e-3


def test_omega_vanishes_on_scalar_operands(trace_map):
    assert omega(trace_map, 2.5 * np.eye(2), 0.75).value == pytest.approx(0.0, abs=1e-12)


def test_omega_argument_checks(trace_map, omega_A):
    with pytest.raises(ConstraintViolationError):
        omega(trace_map, omega_A, 0.3)
    with pytest.raises(SingularOperandError):
        omega(trace_map, np.diag([1.0, 0.0]), 0.5)


def test_omega_is_nonnegative_under_compression(compression, fixed_A):
    result = omega(compression, fixed_A, 0.6)
    assert result.value >= 0.0
    assert result.infimum >= 0.0
    assert len(result.sequence_tail) == 11
