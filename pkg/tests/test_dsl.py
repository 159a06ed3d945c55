"""Expression grammar, evaluation, round-trips, and the polynomial reader."""

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fermatreals import FermatReal, ParseError, format_fermat, normalize, real, t, t_power
from fermatreals.dsl import (
    Apply,
    BinOp,
    Neg,
    Num,
    Pow,
    TGen,
    evaluate,
    parse,
    parse_polynomial,
    parse_value,
)
from fermatreals.errors import FermatError
from conftest import EXPONENT_POOL, random_fermat


class TestParse:
    def test_three_terms(self):
        node = parse("3/2 + 2*t^(1/2) - t")
        assert isinstance(node, BinOp) and node.op == "-"
        assert isinstance(node.left, BinOp) and node.left.op == "+"
        assert node.left.left == Num(F(3, 2))

    def test_power_node(self):
        node = parse("(1+t^(1/2))^(2)")
        assert isinstance(node, Pow) and node.exponent == 2

    def test_high_t_power_parses_then_vanishes(self):
        node = parse("t^(3/2)")
        assert isinstance(node, Pow)
        assert evaluate(node).is_zero()

    def test_unary_minus(self):
        assert parse_value("-1/2 + t") == normalize([(F(1), 1)], std=F(-1, 2))

    def test_oracle_application(self):
        assert parse_value("powint:3(1+t)") == normalize([(F(1), 3)], std=1)
        assert parse_value("poly:[0,0,1](t^(1/2))") == t()

    def test_whitespace_insensitive(self):
        assert parse_value(" 1+ 2 * t ^ ( 1 / 2 ) ") == parse_value("1+2*t^(1/2)")

    def test_errors_carry_position(self):
        with pytest.raises(ParseError) as err:
            parse("1 + * 2")
        assert err.value.pos == 4
        with pytest.raises(ParseError):
            parse("")
        with pytest.raises(ParseError):
            parse("t^(1/0)")
        with pytest.raises(ParseError):
            parse("(1+t")
        with pytest.raises(ParseError):
            parse("1 + 2)")

    def test_fractional_power_of_non_t_rejected(self):
        with pytest.raises(FermatError):
            parse_value("(1+t)^(1/2)")

    def test_negative_power_rejected(self):
        with pytest.raises(FermatError):
            parse_value("t^(-1)")

    def test_deep_nesting_is_a_parse_error(self):
        with pytest.raises(ParseError):
            parse("(" * 5000 + "1" + ")" * 5000)


class TestEvaluate:
    def test_arithmetic(self):
        assert parse_value("2*3 - 1") == real(5)
        assert parse_value("(1 + t^(1/2))^(2)") == normalize(
            [(F(1, 2), 2), (F(1), 1)], std=1
        )
        assert parse_value("t*t").is_zero()

    def test_round_trip_spec_shape(self):
        v = parse_value("3/2 + 2*t^(1/2) - 1*t^(1/1)")
        assert format_fermat(v) == "3/2 + 2*t^(1/2) - t^(1/1)"
        assert parse_value(format_fermat(v)) == v


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9))
def test_round_trip_random_canonical_forms(seed):
    rng = random.Random(seed)
    v = random_fermat(rng, max_terms=5, coef_bound=30)
    assert parse_value(format_fermat(v)) == v


def test_fuzz_parse_never_crashes():
    rng = random.Random(97)
    alphabet = "0123456789+-*/^()t sincoexplg[],:_"
    for _ in range(2000):
        s = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 25)))
        try:
            parse(s)
        except ParseError:
            pass


class TestPolynomialReader:
    def test_split_example(self):
        h = parse_polynomial("y^3 + x*y^2")
        assert h.arity == 2
        assert h.monomials == {(0, 3): F(1), (1, 2): F(1)}

    def test_implicit_products_and_parens(self):
        h = parse_polynomial("2x y + (y - 1)^2", variables=["x", "y"])
        assert h.monomials == {
            (1, 1): F(2),
            (0, 2): F(1),
            (0, 1): F(-2),
            (0, 0): F(1),
        }

    def test_rational_coefficients(self):
        h = parse_polynomial("1/2 y^2 - y", variables=["y"])
        assert h.monomials == {(2,): F(1, 2), (1,): F(-1)}

    def test_unknown_variable(self):
        with pytest.raises(ParseError):
            parse_polynomial("y + z", variables=["y"])

    def test_partials_match_direct_evaluation(self):
        h = parse_polynomial("y^3 + x*y^2")
        assert h.partial((0, 0), (F(2), F(3))) == 27 + 2 * 9
        assert h.partial((1, 2), (F(0), F(1))) == 2
