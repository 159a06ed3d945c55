"""Backend-specific behavior: exact roots, float tolerance, precision."""

from fractions import Fraction as F

import mpmath
import pytest

from fermatreals import BIGFLOAT, EXACT, NoRealRoot, RootNotExact
from fermatreals.scalars import (
    field_by_name,
    get_precision,
    mpf_to_fraction,
    set_precision,
)


class TestExactField:
    def test_nth_root_exact(self):
        assert EXACT.nth_root(F(8, 27), 3) == F(2, 3)
        assert EXACT.nth_root(F(-8), 3) == -2
        assert EXACT.nth_root(F(16), 4) == 2

    def test_nth_root_irrational(self):
        with pytest.raises(RootNotExact):
            EXACT.nth_root(F(2), 2)
        with pytest.raises(RootNotExact):
            EXACT.nth_root(F(9, 7), 2)

    def test_even_root_of_negative(self):
        with pytest.raises(NoRealRoot):
            EXACT.nth_root(F(-4), 2)

    def test_power(self):
        assert EXACT.power(F(1, 100), F(1, 2)) == F(1, 10)
        assert EXACT.power(F(8), F(2, 3)) == 4

    def test_large_exact_roots(self):
        base = F(12345, 67) ** 5
        assert EXACT.nth_root(base, 5) == F(12345, 67)


class TestBigFloatField:
    def test_precision_controls_eps(self):
        set_precision(30)
        assert get_precision() == 30
        assert BIGFLOAT.is_zero(mpmath.mpf(10) ** -25)
        assert not BIGFLOAT.is_zero(mpmath.mpf(10) ** -15)
        set_precision(50)

    def test_signed_roots(self):
        r = BIGFLOAT.nth_root(BIGFLOAT.convert(-8), 3)
        assert abs(r + 2) < BIGFLOAT.eps
        with pytest.raises(NoRealRoot):
            BIGFLOAT.nth_root(BIGFLOAT.convert(-4), 2)

    def test_convert_fraction(self):
        x = BIGFLOAT.convert(F(1, 3))
        assert abs(x * 3 - 1) < BIGFLOAT.eps

    def test_mpf_to_fraction_exact(self):
        x = mpmath.mpf("3.515625")  # dyadic: 3 + 33/64
        assert mpf_to_fraction(x) == F(225, 64)
        assert mpf_to_fraction(mpmath.mpf(0)) == 0
        assert mpf_to_fraction(-x) == -F(225, 64)


def test_field_lookup():
    assert field_by_name("exact") is EXACT
    assert field_by_name("float") is BIGFLOAT
    with pytest.raises(ValueError):
        field_by_name("decimal")
