import math

import pytest

from layerfem import ExpressionError, parse_coefficient_expression, to_callable
from layerfem.problem import lorenz_example, manufactured_problem


def evaluate(text, x=0.0):
    return parse_coefficient_expression(text).evaluate(x)


def test_basic_examples():
    assert evaluate("exp(x) - 2*x^2", 1.0) == pytest.approx(math.e - 2.0, rel=1e-15)
    assert evaluate("1", 0.7) == 1.0
    assert evaluate("2^3^2") == 512.0  # right associative


def test_precedence():
    assert evaluate("-x^2", 3.0) == -9.0  # power binds tighter than unary minus
    assert evaluate("-2^2") == -4.0
    assert evaluate("2^-2") == 0.25
    assert evaluate("2+3*4") == 14.0
    assert evaluate("(2+3)*4") == 20.0
    assert evaluate("2-3-4") == -5.0  # left associative
    assert evaluate("8/4/2") == 1.0
    assert evaluate("-x*2", 5.0) == -10.0


def test_number_formats():
    assert evaluate("1.5e2") == 150.0
    assert evaluate(".5") == 0.5
    assert evaluate("2.") == 2.0


def test_syntax_error_reports_position():
    with pytest.raises(ExpressionError, match="position 2") as info:
        parse_coefficient_expression("2+*3")
    assert info.value.position == 2


def test_unclosed_parenthesis():
    with pytest.raises(ExpressionError, match="expected"):
        parse_coefficient_expression("(1 + x")


def test_trailing_input():
    with pytest.raises(ExpressionError, match="trailing"):
        parse_coefficient_expression("1 + 2)")


def test_unknown_identifier():
    with pytest.raises(ExpressionError, match="unknown identifier 'y'"):
        parse_coefficient_expression("y + 1")


def test_unknown_function():
    with pytest.raises(ExpressionError, match="unknown function 'tan'"):
        parse_coefficient_expression("tan(x)")


def test_arity_mismatch():
    with pytest.raises(ExpressionError, match="takes 1 argument, got 2"):
        parse_coefficient_expression("exp(x, 1)")


def test_empty_expression():
    with pytest.raises(ExpressionError, match="empty"):
        parse_coefficient_expression("   ")


def test_unexpected_character():
    with pytest.raises(ExpressionError, match="unexpected character"):
        parse_coefficient_expression("2 % 3")


def test_evaluation_failures_are_arithmetic_errors():
    with pytest.raises(ArithmeticError):
        evaluate("1/x", 0.0)
    with pytest.raises(ArithmeticError):
        evaluate("log(x - 2)", 0.0)
    with pytest.raises(ArithmeticError):
        evaluate("(0 - 2)^0.5", 0.0)


def test_functions_match_math_module():
    fn = to_callable(parse_coefficient_expression("sqrt(x) + sin(x)*cos(x) + log(x)"))
    for x in (0.5, 1.0, 2.7):
        want = math.sqrt(x) + math.sin(x) * math.cos(x) + math.log(x)
        assert fn(x) == pytest.approx(want, rel=1e-15)


def test_parsed_catalog_formulas_match_hand_coded_closures():
    lorenz = lorenz_example(0.5)
    f_parsed = to_callable(parse_coefficient_expression("exp(x)"))
    exact_parsed = to_callable(
        parse_coefficient_expression(
            "(exp(x) - (1 - exp(1 - 1/0.5) + (exp(1) - 1)*exp((x - 1)/0.5))"
            "/(1 - exp(-1/0.5)))/(1 - 0.5)"
        )
    )
    manufactured = manufactured_problem(0.1)
    mf_parsed = to_callable(
        parse_coefficient_expression("1 + x + (1 - x)*exp((x - 1)/0.1)")
    )
    for x in [0.1 * k for k in range(1, 10)]:
        for parsed, closure in (
            (f_parsed, lorenz.f),
            (exact_parsed, lorenz.exact),
            (mf_parsed, manufactured.f),
        ):
            a, b = parsed(x), closure(x)
            assert abs(a - b) <= 1e-14 * max(1.0, abs(b))
