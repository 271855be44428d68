import math

import pytest

from kahler_spacetime.errors import DomainError, ParseError
from kahler_spacetime.expr import Binary, Const, Coord, Pow, Unary, parse_expr, x


def test_precedence_example():
    assert parse_expr("x0^2 + 3*x1") == Binary(
        "add", Pow(Coord(0), 2.0), Binary("mul", Const(3.0), Coord(1)))


def test_function_call_example():
    assert parse_expr("sin(x0)/x2") == Binary("div", Unary("sin", Coord(0)), Coord(2))


def test_trailing_operator_reports_offset():
    with pytest.raises(ParseError) as info:
        parse_expr("x0 + ")
    assert info.value.position == 5


@pytest.mark.parametrize("text, offset", [
    ("x4", 0),
    ("foo(x0)", 0),
    ("(x0", 3),
    ("x0 $ x1", 3),
    ("sin x0", 4),
    ("x0 x1", 3),
    ("", 0),
])
def test_malformed(text, offset):
    with pytest.raises(ParseError) as info:
        parse_expr(text)
    assert info.value.position == offset


def test_whitespace_insensitive():
    assert parse_expr(" x0*  x1 ") == parse_expr("x0*x1")


def test_unary_minus_binds_looser_than_power():
    assert parse_expr("-x0^2").evaluate((3, 0, 0, 0)) == -9.0
    assert parse_expr("2^-1").evaluate((0, 0, 0, 0)) == 0.5


def test_power_is_right_associative():
    assert parse_expr("2^3^2").evaluate((0, 0, 0, 0)) == 512.0


def test_subtraction_is_left_associative():
    assert parse_expr("x0 - x1 - x2").evaluate((10, 3, 2, 0)) == 5.0


def test_variable_exponent_rewritten_through_exp_ln():
    e = parse_expr("x1^x0")
    assert isinstance(e, Unary) and e.op == "exp"
    assert math.isclose(e.evaluate((2.5, 1.7, 0, 0)), 1.7**2.5, rel_tol=1e-14)


def test_scientific_literals():
    assert parse_expr("1.5e-3*x0").evaluate((2, 0, 0, 0)) == 3e-3


@pytest.mark.parametrize("text", [
    "x0^2 + 3*x1",
    "-(1 - 2.0/x1)",
    "x1^2*sin(x2)^2",
    "1/(1 - x1^2)",
    "x0^(-2)",
    "(x0 - x1) - (x2 - x3)",
    "x0/(x1*x2)",
    "-x0^2",
    "(x0^2)^3",
    "exp(-x0)*cosh(x1)/sqrt(1 + x2^2) - ln(2 + sin(x3))",
])
def test_to_text_round_trip(text):
    e = parse_expr(text)
    again = parse_expr(e.to_text())
    assert again == e
    p = (0.7, 0.4, 1.1, 0.3)
    assert again.evaluate(p) == e.evaluate(p)


def test_operator_overloads_build_trees():
    e = 2 * x(0) + x(1) ** 2 - 1 / x(2)
    assert e.evaluate((1, 2, 4, 0)) == 2 + 4 - 0.25


@pytest.mark.parametrize("text, point", [
    ("1/x0", (0, 0, 0, 0)),
    ("sqrt(x0)", (-1, 0, 0, 0)),
    ("ln(x0)", (0, 0, 0, 0)),
    ("x0^0.5", (-2, 0, 0, 0)),
    ("x0^-1", (0, 0, 0, 0)),
])
def test_evaluate_domain_errors(text, point):
    with pytest.raises(DomainError):
        parse_expr(text).evaluate(point)


def test_coordinate_index_checked():
    with pytest.raises(ValueError):
        Coord(4)
