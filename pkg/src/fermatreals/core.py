"""Exact arithmetic and total order for the ring of Fermat reals.

A value is a truncated fractional-power polynomial

    x = std + sum(coef_i * t**exp_i)      0 < exp_1 < ... < exp_l <= 1

in a formal positive infinitesimal ``t``.  Powers of ``t`` above 1 are
identified with 0, which makes every infinitesimal nilpotent.  Values are
kept in canonical decomposition form at all times: exponents strictly
increasing rationals in (0, 1], no zero coefficients, so equality is
structural.

Values are immutable and every operation is a pure function; they can be
shared freely across threads.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

from .errors import BackendMismatch
from .scalars import BIGFLOAT, EXACT, ExactBackendRootNeeded

ONE = Fraction(1)

Term = Tuple[Fraction, object]  # (exponent, coefficient)


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _as_exponent(e) -> Fraction:
    e = Fraction(e) if not isinstance(e, Fraction) else e
    if e <= 0:
        raise ValueError(f"exponent must be positive, got {e}")
    return e


class FermatReal:
    """One element of the ring, in canonical decomposition form.

    Construct through :meth:`from_terms`, :meth:`real`, :meth:`t_power`
    or module-level helpers; the constructor normalizes eagerly (merges
    duplicate exponents, drops zero coefficients and exponents above 1).
    """

    __slots__ = ("std", "terms", "field", "_hash")

    def __init__(self, std, raw_terms: Iterable[Term] = (), field=EXACT):
        acc: dict[Fraction, object] = {}
        std = field.convert(std) if not _is_field_scalar(std, field) else std
        for e, c in raw_terms:
            if e == 0 or e is None:
                std = std + c
                continue
            e = _as_exponent(e)
            if e > ONE:
                continue
            if e in acc:
                acc[e] = acc[e] + c
            else:
                acc[e] = c
        terms = tuple(
            (e, acc[e]) for e in sorted(acc) if not field.is_zero(acc[e])
        )
        object.__setattr__(self, "std", std)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *args):
        raise AttributeError("FermatReal is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_terms(cls, std, raw_terms: Iterable[Term] = (), field=EXACT) -> "FermatReal":
        field_conv = field.convert
        return cls(field_conv(std), [(e, field_conv(c)) for e, c in raw_terms], field)

    @classmethod
    def real(cls, value, field=EXACT) -> "FermatReal":
        return cls(field.convert(value), (), field)

    @classmethod
    def t_power(cls, exponent, coef=1, field=EXACT) -> "FermatReal":
        return cls.from_terms(0, [(Fraction(exponent), coef)], field)

    # -- structure ---------------------------------------------------------

    @property
    def standard_part(self):
        return self.std

    def infinitesimal_part(self) -> "FermatReal":
        return FermatReal(self.field.zero, self.terms, self.field)

    def is_zero(self) -> bool:
        return self.field.is_zero(self.std) and not self.terms

    def is_real(self) -> bool:
        return not self.terms

    def is_infinitesimal(self) -> bool:
        """Membership in D_inf: zero standard part."""
        return self.field.is_zero(self.std)

    def leading(self) -> Term:
        """(exponent, coefficient) of the smallest-exponent term of dx."""
        if not self.terms:
            raise ValueError("no infinitesimal part")
        return self.terms[0]

    def coefficient(self, exponent) -> object:
        e = Fraction(exponent)
        for te, tc in self.terms:
            if te == e:
                return tc
        return self.field.zero

    def order_omega(self) -> Fraction:
        """1/b1 for the smallest exponent b1 of dx; 0 when dx = 0.

        The range is {0} union [1, inf) since exponents never exceed 1.
        """
        if not self.terms:
            return Fraction(0)
        return 1 / self.terms[0][0]

    def nilpotency_index(self) -> int:
        """Least m >= 1 with dx**m == 0; equals floor(omega) + 1."""
        if not self.terms:
            return 1
        w = self.order_omega()
        return int(w.numerator // w.denominator) + 1

    # -- ring operations ---------------------------------------------------

    def _check_field(self, other: "FermatReal") -> None:
        if self.field is not other.field:
            raise BackendMismatch(
                f"cannot mix {self.field.name} and {other.field.name} values"
            )

    def _coerce(self, other) -> "FermatReal | None":
        if isinstance(other, FermatReal):
            self._check_field(other)
            return other
        if isinstance(other, (int, Fraction)):
            return FermatReal.real(other, self.field)
        return None

    def __add__(self, other) -> "FermatReal":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FermatReal(self.std + o.std, self.terms + o.terms, self.field)

    __radd__ = __add__

    def __neg__(self) -> "FermatReal":
        return FermatReal(-self.std, [(e, -c) for e, c in self.terms], self.field)

    def __sub__(self, other) -> "FermatReal":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "FermatReal":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, scalar) -> "FermatReal":
        """Multiply by a ring scalar (a real number)."""
        s = scalar if _is_field_scalar(scalar, self.field) else self.field.convert(scalar)
        return FermatReal(
            self.std * s, [(e, c * s) for e, c in self.terms], self.field
        )

    def __mul__(self, other) -> "FermatReal":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not isinstance(other, FermatReal):
            return self.scale(other)
        xs, ys = self.std, o.std
        raw: list[Term] = []
        if not self.field.is_zero(ys):
            raw.extend((e, c * ys) for e, c in self.terms)
        if not self.field.is_zero(xs):
            raw.extend((e, c * xs) for e, c in o.terms)
        for e1, c1 in self.terms:
            for e2, c2 in o.terms:
                e = e1 + e2
                if e <= ONE:  # products past degree 1 are o(t), hence 0
                    raw.append((e, c1 * c2))
        return FermatReal(xs * ys, raw, self.field)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "FermatReal":
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = FermatReal.real(1, self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- order -------------------------------------------------------------

    def compare(self, other) -> Ordering:
        """Dictionary order on (standard part, coefficients by exponent)."""
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot compare FermatReal with {type(other)}")
        if self.std != o.std:
            return Ordering.LESS if self.std < o.std else Ordering.GREATER
        mine = dict(self.terms)
        theirs = dict(o.terms)
        zero = self.field.zero
        for e in sorted(set(mine) | set(theirs)):
            a = mine.get(e, zero)
            b = theirs.get(e, zero)
            if a != b:
                return Ordering.LESS if a < b else Ordering.GREATER
        return Ordering.EQUAL

    def __lt__(self, other):
        return self.compare(other) is Ordering.LESS

    def __le__(self, other):
        return self.compare(other) is not Ordering.GREATER

    def __gt__(self, other):
        return self.compare(other) is Ordering.GREATER

    def __ge__(self, other):
        return self.compare(other) is not Ordering.LESS

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) or isinstance(other, FermatReal):
            try:
                return self.compare(other) is Ordering.EQUAL
            except BackendMismatch:
                return False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.std, self.terms)))
        return self._hash

    def __abs__(self) -> "FermatReal":
        return -self if self < FermatReal.real(0, self.field) else self

    # -- evaluation and display ---------------------------------------------

    def eval_at(self, t0):
        """Value of the representing polynomial at a scalar t0 > 0.

        Exact backends raise ExactBackendRootNeeded when a fractional power
        of t0 is irrational.
        """
        t0 = self.field.convert(t0)
        if not t0 > 0:
            raise ValueError("t0 must be positive")
        total = self.std
        for e, c in self.terms:
            total = total + c * self.field.power(t0, e)
        return total

    def text(self) -> str:
        return format_fermat(self)

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"FermatReal({self.text()!r})"

    def json_obj(self) -> dict:
        fmt = self.field.format
        return {
            "std": fmt(self.std),
            "terms": [{"exp": str(e), "coef": fmt(c)} for e, c in self.terms],
        }


def _is_field_scalar(value, field) -> bool:
    if field is EXACT:
        return isinstance(value, Fraction)
    return type(value).__name__ == "mpf"


# -- canonical text form ----------------------------------------------------


def format_fermat(x: FermatReal) -> str:
    """Canonical text form, bit-exact for the exact backend.

    ``3/2 + 2*t^(1/2) - t^(1/1)``: the standard part is omitted when zero
    (unless there are no terms at all), unit coefficients print bare, and
    exponents always print as a parenthesized fraction.
    """
    fmt = x.field.format
    pieces: list[str] = []
    std_zero = x.field.is_zero(x.std)
    if not std_zero or not x.terms:
        pieces.append(fmt(x.std))
    for e, c in x.terms:
        neg = c < 0
        mag = -c if neg else c
        body = f"t^({e.numerator}/{e.denominator})"
        if mag != 1:
            body = f"{fmt(mag)}*{body}"
        if not pieces:
            pieces.append(f"-{body}" if neg else body)
        else:
            pieces.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(pieces)


# -- module-level operation names ------------------------------------------


def normalize(raw_terms: Iterable[Term], std=0, field=EXACT) -> FermatReal:
    """Canonical form of a quasi-decomposition.

    Duplicate exponents merge by summation, zero coefficients drop,
    exponents above 1 drop (they are o(t)).
    """
    return FermatReal.from_terms(std, raw_terms, field)


def real(value, field=EXACT) -> FermatReal:
    return FermatReal.real(value, field)


def t_power(exponent, coef=1, field=EXACT) -> FermatReal:
    return FermatReal.t_power(exponent, coef, field)


def t(field=EXACT) -> FermatReal:
    return FermatReal.t_power(1, 1, field)


def add(x: FermatReal, y: FermatReal) -> FermatReal:
    return x + y


def negate(x: FermatReal) -> FermatReal:
    return -x


def subtract(x: FermatReal, y: FermatReal) -> FermatReal:
    return x - y


def scale(scalar, x: FermatReal) -> FermatReal:
    return x.scale(scalar)


def mul(x: FermatReal, y: FermatReal) -> FermatReal:
    return x * y


def pow_nat(x: FermatReal, n: int) -> FermatReal:
    if n < 0:
        raise ValueError("only natural powers exist (the ring has zero divisors)")
    return x**n


def compare(x: FermatReal, y) -> Ordering:
    return x.compare(y)


def order_omega(x: FermatReal) -> Fraction:
    return x.order_omega()


def nilpotency_index(x: FermatReal) -> int:
    return x.nilpotency_index()


def eval_representative(x: FermatReal, t0):
    return x.eval_at(t0)


def shift_by_t_power(x: FermatReal, exponent: Fraction) -> FermatReal:
    """x * t**exponent computed by exponent shifting (exponent >= 0)."""
    e0 = Fraction(exponent)
    if e0 == 0:
        return x
    raw = [(e0, x.std)] if not x.field.is_zero(x.std) else []
    raw.extend((e + e0, c) for e, c in x.terms if e + e0 <= ONE)
    return FermatReal(x.field.zero, raw, x.field)


def approx_equal(x: FermatReal, y: FermatReal, tol) -> bool:
    """Coefficient-wise closeness; useful under the float backend."""
    if x.field is not y.field:
        return False
    diff = x - y
    if abs(diff.std) > tol:
        return False
    return all(abs(c) <= tol for _, c in diff.terms)
