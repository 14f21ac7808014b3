import math

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from signorbit import ExpressionError, format_complex, format_real, parse_complex, parse_real
from signorbit.diophantine import convergents


def oracle_real(build):
    """Independent high-precision evaluation, rounded once to double."""
    with mpmath.workprec(300):
        return float(build())


def test_plain_literal():
    assert parse_real("0.5") == 0.5
    assert parse_real("42") == 42.0
    assert parse_real("1e-7") == 1e-7
    assert parse_real("2.5E3") == 2500.0


def test_one_over_sqrt6_is_nearest_double():
    expected = oracle_real(lambda: 1 / mpmath.sqrt(6))
    assert parse_real("1/sqrt(6)") == expected


def test_fig1_alpha_is_nearest_double():
    expected = oracle_real(
        lambda: mpmath.mpf("1.0415") / mpmath.sqrt(2 * mpmath.pi ** 2))
    assert parse_real("1.0415/sqrt(2*pi^2)") == expected


def test_pathological_alpha_convergents():
    # the parsed double must carry the extreme convergent jump 17 -> 415944
    alpha = parse_real("10/17+1e-7*sqrt(2)")
    denominators = convergents(alpha, q_cap=10 ** 6).denominators()
    assert denominators[:5] == [1, 2, 5, 17, 415944]


def test_parse_complex_literals():
    assert parse_complex("0") == 0j
    assert parse_complex("0.747467+0.445271*i") == complex(0.747467, 0.445271)
    assert parse_complex("-1/2 - i") == complex(-0.5, -1.0)
    assert parse_complex("i^2") == complex(-1.0, 0.0)
    assert parse_complex("(1+i)*(1-i)") == complex(2.0, 0.0)


PRECEDENCE_CASES = [
    ("1+2*3", 7.0),
    ("2*3+1", 7.0),
    ("1-2+3", 2.0),  # left to right
    ("8-4-2", 2.0),
    ("8/4/2", 1.0),
    ("6/2*3", 9.0),
    ("2*3^2", 18.0),
    ("1+2^2", 5.0),
    ("2^3^2", 64.0),  # left-assoc: (2^3)^2
    ("-2^2", -4.0),  # ^ binds tighter than unary minus
    ("2^-2", 0.25),
    ("-(1+1)", -2.0),
    ("--1", 1.0),
    ("(1+2)*3", 9.0),
    ("sqrt(4)*2", 4.0),
    ("-sqrt(9)", -3.0),
    ("2^2*2", 8.0),
    ("10/5^1", 2.0),
    ("2^0", 1.0),
    ("1/2^2", 0.25),
]


@pytest.mark.parametrize("text,expected", PRECEDENCE_CASES)
def test_precedence_table(text, expected):
    assert parse_real(text) == expected


def test_pi_power_matches_oracle():
    assert parse_real("pi^2") == oracle_real(lambda: mpmath.pi ** 2)


@pytest.mark.parametrize("text,position", [
    ("sqrt(", 5),
    ("(1", 2),
    ("1+", 2),
    ("foo", 0),
    ("1..2", None),
    ("2^0.5", 1),
    ("1*/2", None),
])
def test_syntax_errors_carry_position(text, position):
    with pytest.raises(ExpressionError) as err:
        parse_real(text)
    if position is not None:
        assert err.value.position == position


def test_division_by_zero():
    with pytest.raises(ExpressionError, match="division by zero"):
        parse_real("1/0")
    with pytest.raises(ExpressionError, match="division by zero"):
        parse_real("1/(2-2)")


def test_imaginary_unit_rejected_in_real_context():
    with pytest.raises(ExpressionError, match="imaginary unit") as err:
        parse_real("2*i")
    assert err.value.position == 2
    with pytest.raises(ExpressionError, match="imaginary unit"):
        parse_real("i^2")  # even though the value would be real


def test_negative_sqrt_rejected_in_real_context():
    with pytest.raises(ExpressionError, match="sqrt of a negative"):
        parse_real("sqrt(0-1)")
    assert parse_complex("sqrt(0-1)") == complex(0.0, 1.0)


def test_empty_expression():
    with pytest.raises(ExpressionError):
        parse_real("")
    with pytest.raises(ExpressionError):
        parse_real("   ")


def test_exponent_must_be_literal_integer():
    with pytest.raises(ExpressionError, match="literal integer"):
        parse_real("2^(3)")


def test_roundtrip_paper_values():
    for text in ["1/sqrt(6)", "0.5010866", "1.0415/sqrt(2*pi^2)", "sqrt(2)/3"]:
        value = parse_real(text)
        assert parse_real(format_real(value)) == value


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_roundtrip_real_any_double(x):
    assert parse_real(format_real(x)) == x


@given(st.complex_numbers(allow_nan=False, allow_infinity=False))
def test_roundtrip_complex_any_double(z):
    assert parse_complex(format_complex(z)) == z


def test_whitespace_insensitive():
    assert parse_real(" 1 + 2 * 3 ") == parse_real("1+2*3")
