"""
Tests for scalar function expressions and operator-property certification.
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.errors import DomainViolationError, ExpressionSyntaxError
from src.functions import (
    DeriveKind,
    certify,
    derive,
    lfmps_crosscheck,
    parse_scalar_fn,
    power_fn,
    scalar_shape,
    shifted_power_fn,
)
from src.functions.expressions import POSITIVE
from src.linalg import min_eig, operator_norm
from src.schemas import CertificateVerdict, ConvexityProperty


@pytest.mark.parametrize(
    "text, t, expected",
    [
        ("t", 3.0, 3.0),
        ("pow(t,2)", 3.0, 9.0),
        ("sqrt(t)", 4.0, 2.0),
        ("add(pow(t,2),t)", 2.0, 6.0),
        ("sub(t,1)", 5.0, 4.0),
        ("mul(t,const(3))", 2.0, 6.0),
        ("div(1,add(1,t))", 1.0, 0.5),
        ("pow(add(t,1),0.5)", 3.0, 2.0),
        ("comp(pow(t,2),add(t,1))", 2.0, 9.0),
    ],
)
def test_parse_and_evaluate(text, t, expected):
    f = parse_scalar_fn(text, POSITIVE)
    assert f(t) == pytest.approx(expected, rel=1e-14)


def test_text_form_is_stable():
    f = parse_scalar_fn("div(1,add(1,t))")
    text = f.to_text()
    assert text == "div(const(1),add(const(1),t))"
    assert parse_scalar_fn(text).to_text() == text


@pytest.mark.parametrize("text", ["pow(t,", "foo(t)", "add(t)", "pow(t,2))", "t $ 2"])
def test_syntax_errors_carry_position(text):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_scalar_fn(text)
    assert info.value.position is not None


def test_empty_expression():
    with pytest.raises(ExpressionSyntaxError):
        parse_scalar_fn("   ")


def test_evaluation_outside_domain():
    with pytest.raises(DomainViolationError):
        power_fn(0.5).eval(-1.0)


def test_pole_inside_domain_is_rejected():
    with pytest.raises(DomainViolationError):
        parse_scalar_fn("div(1,sub(t,1))", POSITIVE)


def test_derived_functions():
    f = power_fn(0.5).restrict(POSITIVE)
    t = np.array([0.25, 1.0, 4.0])
    assert_allclose(derive(f, DeriveKind.T_TIMES_F).evaluate(t), t**1.5)
    assert_allclose(derive(f, DeriveKind.T_OVER_F).evaluate(t), t**0.5)
    assert_allclose(derive(f, DeriveKind.F_SQUARED).evaluate(t), t)
    assert_allclose(derive(f, DeriveKind.RECIPROCAL).evaluate(t), t**-0.5)
    assert_allclose(derive(f, DeriveKind.F_POW_R, r=4).evaluate(t), t**2)
    g = shifted_power_fn(1.0, 1.0)
    assert_allclose(derive(f, DeriveKind.FG_OVER_T, g=g).evaluate(t), t**0.5 * (t + 1) / t)


def test_derive_requires_second_function():
    with pytest.raises(ValueError):
        derive(power_fn(2.0), DeriveKind.FG_OVER_T)


@pytest.mark.parametrize(
    "text, m, M, shape",
    [
        ("pow(t,0.5)", 0.5, 4.0, "concave"),
        ("pow(t,2)", 0.5, 4.0, "convex"),
        ("pow(t,-1)", 0.5, 4.0, "convex"),
        ("t", 0.5, 4.0, "linear"),
        ("pow(t,3)", -1.0, 1.0, "neither"),
    ],
)
def test_scalar_shape(text, m, M, shape):
    assert scalar_shape(parse_scalar_fn(text), m, M) == shape


def test_cube_is_not_operator_convex():
    cert = certify(power_fn(3.0), ConvexityProperty.OPERATOR_CONVEX, dim=2, trials=1000, seed=7)
    assert cert.verdict is CertificateVerdict.VIOLATED
    A, B, lam = cert.witness
    assert A.shape == (2, 2) and B.shape == (2, 2)
    assert 0.0 <= lam <= 1.0


def test_square_root_is_operator_monotone():
    f = power_fn(0.5)
    cert = certify(f, ConvexityProperty.OPERATOR_MONOTONE, dim=3, trials=1000, seed=7)
    assert cert.certified
    assert cert.trials == 1000
    assert cert.witness is None


@pytest.mark.parametrize("p", [0.3, 0.5, 1.0])
def test_small_powers_are_operator_monotone_at_dim_two(p):
    cert = certify(power_fn(p), ConvexityProperty.OPERATOR_MONOTONE, dim=2, trials=1000, seed=7)
    assert cert.certified


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_large_powers_have_monotonicity_witnesses_at_dim_two(p):
    cert = certify(power_fn(p), ConvexityProperty.OPERATOR_MONOTONE, dim=2, trials=1000, seed=7)
    assert cert.verdict is CertificateVerdict.VIOLATED
    A, A_plus_P, _ = cert.witness
    assert A.shape == (2, 2)
    assert min_eig(A_plus_P - A) >= -1e-9 * operator_norm(A_plus_P)


def test_square_is_operator_convex_but_not_monotone():
    f = power_fn(2.0)
    assert certify(f, ConvexityProperty.OPERATOR_CONVEX, dim=3, trials=300, seed=3).certified
    assert not certify(f, ConvexityProperty.OPERATOR_MONOTONE, dim=3, trials=300, seed=3).certified


def test_certificates_are_cached():
    f = power_fn(0.5)
    first = certify(f, ConvexityProperty.OPERATOR_CONCAVE, dim=2, trials=50, seed=1)
    assert certify(f, ConvexityProperty.OPERATOR_CONCAVE, dim=2, trials=50, seed=1) is first


def test_certify_rejects_scalar_dimension():
    with pytest.raises(ValueError):
        certify(power_fn(2.0), ConvexityProperty.OPERATOR_CONVEX, dim=1)


def test_square_root_passes_all_equivalent_conditions():
    report = lfmps_crosscheck(power_fn(0.5).restrict(POSITIVE), dim=3, trials=200, seed=7)
    assert report.consistent
    assert all(report.verdicts.values())
    assert set(report.verdicts) == {"f_concave", "f_monotone", "t_over_f_monotone", "t_times_f_convex"}


def test_non_monotone_function_fails_equivalent_conditions():
    report = lfmps_crosscheck(power_fn(2.0).restrict(POSITIVE), dim=2, trials=200, seed=7)
    assert not report.verdicts["f_concave"]
    assert not report.verdicts["f_monotone"]
    assert math.isfinite(report.certificates["f_concave"].max_violation)
