"""Engine-level checks: exact arithmetic, normal ordering, bracket laws."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dfra import algebra
from dfra.symcore import (
    Expression,
    GaussRat,
    Generator,
    ParseError,
    UnknownGeneratorError,
    bracket,
    format_expression,
    jacobi_residual,
    normal_form,
    parse_expression,
)

ALG = algebra.build(3)
TABLE = ALG.table


def test_gaussrat_field_ops():
    a = GaussRat(Fraction(1, 2), Fraction(3, 4))
    b = GaussRat(2, -1)
    assert a + b == GaussRat(Fraction(5, 2), Fraction(-1, 4))
    assert a * b == GaussRat(Fraction(7, 4), 1)
    assert (a / b) * b == a
    assert -a + a == 0
    assert bool(GaussRat(0, 0)) is False


def test_normal_form_reorders_px():
    e = parse_expression("p[1]*x[1]")
    assert normal_form(e, TABLE) == parse_expression("x[1]*p[1] - i")


def test_normal_form_already_ordered():
    e = parse_expression("x[1]*x[1]")
    assert normal_form(e, TABLE) == e


def test_normal_form_coordinate_swap_produces_theta():
    e = parse_expression("x[2]*x[1]")
    assert normal_form(e, TABLE) == parse_expression("x[1]*x[2] - i*theta[1,2]")


def test_bracket_x_pi():
    got = bracket(ALG.x(1), ALG.pi(1, 2), TABLE)
    assert got == parse_expression("-(1/2)i*p[2]")


def test_bracket_theta_theta():
    assert bracket(ALG.theta(1, 2), ALG.theta(1, 3), TABLE).is_zero()


def test_bracket_shifted_coordinates_commute():
    X1 = algebra.shifted_coordinate(ALG, 1)
    X2 = algebra.shifted_coordinate(ALG, 2)
    assert bracket(X1, X2, TABLE).is_zero()


def test_jacobi_x_x_pi():
    assert jacobi_residual(ALG.x(1), ALG.x(2), ALG.pi(1, 2), TABLE).is_zero()


def test_jacobi_momenta():
    assert jacobi_residual(ALG.p(1), ALG.p(2), ALG.p(3), TABLE).is_zero()


def test_unknown_generator_rejected():
    stray = Expression.generator(Generator("x", (9,)))
    with pytest.raises(UnknownGeneratorError):
        normal_form(stray, TABLE)


def test_zero_expression_is_valid_everywhere():
    z = Expression.zero()
    assert normal_form(z, TABLE).is_zero()
    assert bracket(z, ALG.x(1), TABLE).is_zero()


def test_rewrite_budget_guard(monkeypatch):
    import dfra.symcore as sc

    monkeypatch.setattr(sc, "_MAX_REWRITE_FACTOR", 0)
    with pytest.raises(sc.NormalizationError):
        normal_form(parse_expression("p[1]*x[1]"), TABLE)


# -- property tests ---------------------------------------------------------


def _random_expression(rng: random.Random, max_terms=3, max_len=2) -> Expression:
    gens = [
        Generator("x", (1,)), Generator("x", (2,)),
        Generator("p", (1,)), Generator("p", (2,)),
        Generator("theta", (1, 2)), Generator("pi", (1, 2)),
        Generator("theta", (1, 3)), Generator("pi", (2, 3)),
    ]
    e = Expression.zero()
    for _ in range(rng.randint(1, max_terms)):
        word = tuple(rng.choice(gens) for _ in range(rng.randint(0, max_len)))
        coeff = GaussRat(
            Fraction(rng.randint(-3, 3), rng.randint(1, 3)),
            Fraction(rng.randint(-3, 3), rng.randint(1, 3)),
        )
        e = e + Expression({word: coeff}) if coeff else e
    return e


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=60, deadline=None)
def test_bracket_antisymmetry(seed):
    rng = random.Random(seed)
    a = _random_expression(rng)
    b = _random_expression(rng)
    assert (bracket(a, b, TABLE) + bracket(b, a, TABLE)).is_zero()


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=60, deadline=None)
def test_bracket_leibniz(seed):
    rng = random.Random(seed)
    a = _random_expression(rng)
    b = _random_expression(rng)
    c = _random_expression(rng)
    lhs = bracket(normal_form(a * b, TABLE), c, TABLE)
    rhs = normal_form(a * bracket(b, c, TABLE) + bracket(a, c, TABLE) * b, TABLE)
    assert lhs == rhs


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=60, deadline=None)
def test_normal_form_idempotent(seed):
    rng = random.Random(seed)
    e = _random_expression(rng)
    nf = normal_form(e, TABLE)
    assert normal_form(nf, TABLE) == nf


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=40, deadline=None)
def test_coefficients_stay_exact(seed):
    rng = random.Random(seed)
    e = normal_form(_random_expression(rng) * _random_expression(rng), TABLE)
    for coeff in e.terms.values():
        assert isinstance(coeff, GaussRat)
        assert isinstance(coeff.re, Fraction) and isinstance(coeff.im, Fraction)


# -- text syntax ------------------------------------------------------------


def test_parse_example_fixture():
    e = parse_expression("x[1]*p[1] - (1/2)i*theta[1,2]")
    expected = ALG.x(1) * ALG.p(1) - ALG.theta(1, 2) * GaussRat(0, Fraction(1, 2))
    assert e == expected


def test_parse_antisymmetric_index_normalization():
    assert parse_expression("theta[2,1]") == -parse_expression("theta[1,2]")


def test_parse_error_reports_position():
    with pytest.raises(ParseError):
        parse_expression("x[1] +* p[2]")
    with pytest.raises(ParseError):
        parse_expression("1/0 * x[1]")


def test_parse_bracket_requires_table():
    with pytest.raises(ParseError):
        parse_expression("[x[1], x[2]]")


def test_parse_bracket_with_table():
    assert parse_expression("[x[1], x[2]]", TABLE) == parse_expression("i*theta[1,2]")


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=60, deadline=None)
def test_format_parse_round_trip(seed):
    rng = random.Random(seed)
    e = normal_form(_random_expression(rng), TABLE)
    assert parse_expression(format_expression(e)) == e


def test_format_zero():
    assert format_expression(Expression.zero()) == "0"


def test_format_mixed_coefficient_round_trips():
    e = Expression({(): GaussRat(Fraction(1, 2), Fraction(-3, 4))})
    assert parse_expression(format_expression(e)) == e
