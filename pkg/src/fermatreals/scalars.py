"""Scalar coefficient backends.

Every value in the ring carries coefficients from exactly one ordered-field
backend: exact rationals (``fractions.Fraction``) or arbitrary-precision
binary floats (``mpmath.mpf``).  Exponents are *always* exact rationals, no
matter the backend; only coefficients switch representation.

The float backend's working precision is the process-global ``mpmath.mp.dps``
(default 50 decimal digits here); use :func:`set_precision` to change it.
Zero tests under floats use an absolute tolerance of ``10**-(dps-10)`` so
that cancellation noise is not mistaken for structure.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

from .errors import ExactBackendRootNeeded, NoRealRoot, RootNotExact

DEFAULT_PRECISION = 50

mpmath.mp.dps = DEFAULT_PRECISION


def set_precision(digits: int) -> None:
    """Set the decimal working precision of the float backend."""
    if digits < 5:
        raise ValueError("precision below 5 digits is not supported")
    mpmath.mp.dps = digits


def get_precision() -> int:
    return mpmath.mp.dps


def _int_nth_root(n: int, k: int) -> tuple[int, bool]:
    """Floor k-th root of n >= 0, plus a flag telling whether it is exact."""
    if n < 0:
        raise ValueError("negative radicand")
    if n in (0, 1) or k == 1:
        return n, True
    # Newton iteration on integers; converges from above.
    x = 1 << (-(-n.bit_length() // k))
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x, x**k == n


class ExactField:
    """Arbitrary-size rational arithmetic; all operations are exact."""

    name = "exact"

    def convert(self, value) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value)
        if isinstance(value, float):
            return Fraction(value).limit_denominator(10**12)
        raise TypeError(f"cannot convert {value!r} to an exact rational")

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def is_zero(self, s: Fraction) -> bool:
        return s == 0

    def sign(self, s: Fraction) -> int:
        return (s > 0) - (s < 0)

    def nth_root(self, s: Fraction, k: int):
        """Exact k-th real root; raises RootNotExact when irrational."""
        if k <= 0:
            raise ValueError("root order must be positive")
        if s < 0:
            if k % 2 == 0:
                raise NoRealRoot(f"even root of negative rational {s}")
            return -self.nth_root(-s, k)
        pn, ok_n = _int_nth_root(s.numerator, k)
        pd, ok_d = _int_nth_root(s.denominator, k)
        if not (ok_n and ok_d):
            raise RootNotExact(f"{s} has no rational {k}-th root")
        return Fraction(pn, pd)

    def power(self, s: Fraction, e: Fraction):
        """s**e for rational e; exact or ExactBackendRootNeeded."""
        if s < 0:
            raise ValueError("rational powers of negatives are not supported")
        base = s**e.numerator
        try:
            return self.nth_root(base, e.denominator)
        except RootNotExact as exc:
            raise ExactBackendRootNeeded(str(exc)) from exc

    def sqrt(self, s: Fraction):
        return self.nth_root(s, 2)

    def format(self, s: Fraction) -> str:
        return str(s)

    def __repr__(self) -> str:
        return "ExactField()"


class BigFloatField:
    """mpmath-backed floats at the process-global working precision."""

    name = "float"

    @property
    def precision(self) -> int:
        return mpmath.mp.dps

    @property
    def eps(self):
        return mpmath.mpf(10) ** (-(mpmath.mp.dps - 10))

    def convert(self, value):
        if isinstance(value, mpmath.mpf):
            return value
        if isinstance(value, Fraction):
            return mpmath.mpf(value.numerator) / value.denominator
        if isinstance(value, (int, float, str)):
            return mpmath.mpf(value)
        raise TypeError(f"cannot convert {value!r} to a float scalar")

    @property
    def zero(self):
        return mpmath.mpf(0)

    @property
    def one(self):
        return mpmath.mpf(1)

    def is_zero(self, s) -> bool:
        return abs(s) < self.eps

    def sign(self, s) -> int:
        if self.is_zero(s):
            return 0
        return 1 if s > 0 else -1

    def nth_root(self, s, k: int):
        if k <= 0:
            raise ValueError("root order must be positive")
        if s < 0:
            if k % 2 == 0:
                raise NoRealRoot(f"even root of negative value {s}")
            return -mpmath.root(-s, k)
        return mpmath.root(s, k)

    def power(self, s, e: Fraction):
        return mpmath.power(s, mpmath.mpf(e.numerator) / e.denominator)

    def sqrt(self, s):
        return mpmath.sqrt(s)

    def format(self, s) -> str:
        return mpmath.nstr(s, mpmath.mp.dps - 2)

    def __repr__(self) -> str:
        return f"BigFloatField(dps={self.precision})"


EXACT = ExactField()
BIGFLOAT = BigFloatField()


def field_by_name(name: str):
    if name in ("exact", "rational"):
        return EXACT
    if name in ("float", "bigfloat"):
        return BIGFLOAT
    raise ValueError(f"unknown backend {name!r} (use 'exact' or 'float')")


def mpf_to_fraction(x) -> Fraction:
    """Exact Fraction equal to an mpf (binary floats are dyadic rationals)."""
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    man = int(man)
    if man == 0:
        return Fraction(0)
    value = Fraction(man) * Fraction(2) ** exp
    return -value if sign else value
