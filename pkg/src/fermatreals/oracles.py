"""Smooth functions presented as derivative oracles.

A univariate oracle answers ``derivative(n, a)`` (with ``derivative(0, a)``
the plain value) and may declare flatness at a point.  Polynomial oracles
differentiate symbolically and are exact over either backend; the
transcendental oracles (sin, cos, exp, log) require the float backend.
A multivariate function is a :class:`PartialOracle` answering mixed
partials by multi-index.

Oracles are stateless and freely shareable.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Optional, Sequence

import mpmath

from .errors import FermatError
from .scalars import EXACT

DEFAULT_SEARCH_CAP = 64


class DerivativeOracle:
    """Base class; subclasses implement :meth:`derivative`."""

    identifier = "oracle"
    search_cap = DEFAULT_SEARCH_CAP

    def derivative(self, n: int, a):
        raise NotImplementedError

    def flat_at(self, a) -> Optional[bool]:
        """True/False when flatness at ``a`` is knowable, else None."""
        return None

    def __call__(self, a):
        return self.derivative(0, a)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.identifier}>"


def _require_float(a, who: str):
    if isinstance(a, Fraction):
        raise FermatError(
            f"{who} is only available under the float backend"
        )


class PolynomialOracle(DerivativeOracle):
    """sum(coeffs[k] * u**k) with exact symbolic differentiation."""

    def __init__(self, coeffs: Sequence, identifier: str | None = None):
        self.coeffs = tuple(Fraction(c) for c in coeffs)
        while self.coeffs and self.coeffs[-1] == 0:
            self.coeffs = self.coeffs[:-1]
        self._dcache: dict[int, tuple[Fraction, ...]] = {0: self.coeffs}
        if identifier is None:
            identifier = "poly:[" + ",".join(str(c) for c in self.coeffs) + "]"
        self.identifier = identifier

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def derivative_coeffs(self, n: int) -> tuple[Fraction, ...]:
        if n not in self._dcache:
            prev = self.derivative_coeffs(n - 1)
            self._dcache[n] = tuple(c * k for k, c in enumerate(prev))[1:]
        return self._dcache[n]

    def derivative(self, n: int, a):
        cs = self.derivative_coeffs(n)
        if not cs:
            return Fraction(0) if isinstance(a, Fraction) else mpmath.mpf(0)
        acc = cs[-1] if isinstance(a, Fraction) else mpmath.mpf(cs[-1].numerator) / cs[-1].denominator
        for c in reversed(cs[:-1]):
            acc = acc * a + c
        return acc

    def flat_at(self, a) -> bool:
        return all(c == 0 for c in self.coeffs[1:])  # only constants are flat

    def antiderivative(self) -> "PolynomialOracle":
        return PolynomialOracle(
            [Fraction(0)] + [c / (k + 1) for k, c in enumerate(self.coeffs)]
        )


def power_oracle(n: int) -> PolynomialOracle:
    """u**n, the `powint:n` constructor."""
    if n < 0:
        raise ValueError("power must be a nonnegative integer")
    return PolynomialOracle([0] * n + [1], identifier=f"powint:{n}")


class SinOracle(DerivativeOracle):
    identifier = "sin"

    def derivative(self, n: int, a):
        _require_float(a, "sin")
        return mpmath.sin(a + n * mpmath.pi / 2)

    def flat_at(self, a) -> bool:
        return False


class CosOracle(DerivativeOracle):
    identifier = "cos"

    def derivative(self, n: int, a):
        _require_float(a, "cos")
        return mpmath.cos(a + n * mpmath.pi / 2)

    def flat_at(self, a) -> bool:
        return False


class ExpOracle(DerivativeOracle):
    identifier = "exp"

    def derivative(self, n: int, a):
        _require_float(a, "exp")
        return mpmath.exp(a)

    def flat_at(self, a) -> bool:
        return False


class LogOracle(DerivativeOracle):
    identifier = "log"

    def derivative(self, n: int, a):
        _require_float(a, "log")
        if a <= 0:
            raise FermatError("log requires a positive point")
        if n == 0:
            return mpmath.log(a)
        sign = -1 if n % 2 == 0 else 1
        return sign * mpmath.factorial(n - 1) / a**n

    def flat_at(self, a) -> bool:
        return False


class CallableOracle(DerivativeOracle):
    """Library-level escape hatch: wrap an arbitrary derivative function."""

    def __init__(
        self,
        derivative_fn: Callable[[int, object], object],
        identifier: str = "custom",
        flat_points: Sequence | None = None,
        search_cap: int = DEFAULT_SEARCH_CAP,
    ):
        self._fn = derivative_fn
        self.identifier = identifier
        self._flat = set(flat_points) if flat_points is not None else None
        self.search_cap = search_cap

    def derivative(self, n: int, a):
        return self._fn(n, a)

    def flat_at(self, a) -> Optional[bool]:
        if self._flat is None:
            return None
        return a in self._flat


class ExpNegInvOracle(DerivativeOracle):
    """exp(-1/u) for u > 0, glued to 0 on u <= 0: flat exactly at 0.

    d^n/du^n exp(-1/u) = exp(-1/u) * p_n(1/u) with p_0 = 1 and
    p_{n+1}(v) = v^2 (p_n(v) - p_n'(v)); derivative values away from 0
    require the float backend, but classification at 0 needs only the
    flatness declaration.
    """

    identifier = "expneginv"

    def __init__(self):
        self._polys: list[tuple[Fraction, ...]] = [(Fraction(1),)]

    def _poly(self, n: int) -> tuple[Fraction, ...]:
        while len(self._polys) <= n:
            p = self._polys[-1]
            dp = tuple(c * k for k, c in enumerate(p))[1:]
            diff = [a - b for a, b in
                    ((p[i] if i < len(p) else Fraction(0),
                      dp[i] if i < len(dp) else Fraction(0))
                     for i in range(max(len(p), len(dp))))]
            self._polys.append((Fraction(0), Fraction(0), *diff))
        return self._polys[n]

    def derivative(self, n: int, a):
        if isinstance(a, Fraction):
            if a <= 0:
                return Fraction(0)
            _require_float(a, "expneginv away from 0")
        if a <= 0:
            return mpmath.mpf(0)
        v = 1 / mpmath.mpf(a)
        acc = mpmath.mpf(0)
        for c in reversed(self._poly(n)):
            acc = acc * v + mpmath.mpf(c.numerator) / c.denominator
        return mpmath.exp(-v) * acc

    def flat_at(self, a) -> bool:
        return a <= 0  # identically zero on the left, flat at the glue point


# -- multivariate ------------------------------------------------------------


class PartialOracle:
    """A smooth function of ``arity`` variables answering mixed partials."""

    identifier = "partial"
    arity = 1

    def partial(self, index: tuple[int, ...], point: tuple):
        raise NotImplementedError

    def __call__(self, point: tuple):
        return self.partial((0,) * self.arity, point)

    def degree_in(self, var: int) -> Optional[int]:
        """Degree bound in one variable, when knowable (else None)."""
        return None

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.identifier}>"


def _falling(e: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= e - i
    return out


class MultiPolynomialOracle(PartialOracle):
    """Multivariate polynomial from a monomial-exponent map, exact partials."""

    def __init__(self, arity: int, monomials: dict, identifier: str | None = None):
        self.arity = arity
        self.monomials = {
            tuple(m): Fraction(c) for m, c in monomials.items() if Fraction(c) != 0
        }
        for m in self.monomials:
            if len(m) != arity:
                raise ValueError(f"monomial {m} does not match arity {arity}")
        self.identifier = identifier or f"mpoly({arity})"

    def degree_in(self, var: int) -> int:
        return max((m[var] for m in self.monomials), default=0)

    def partial(self, index: tuple[int, ...], point: tuple):
        if len(index) != self.arity or len(point) != self.arity:
            raise ValueError("index/point arity mismatch")
        exact = all(isinstance(x, Fraction) for x in point)
        total = Fraction(0) if exact else mpmath.mpf(0)
        for mono, coef in self.monomials.items():
            factor = 1
            for e, k in zip(mono, index):
                if k > e:
                    factor = 0
                    break
                factor *= _falling(e, k)
            if factor == 0:
                continue
            val = coef * factor
            for x, e, k in zip(point, mono, index):
                val = val * x ** (e - k)
            total = total + val
        return total

    def substitute_prefix(self, values: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Plug exact values into all but the last variable; returns the
        dense coefficient tuple of the remaining univariate polynomial."""
        return self.partial_coeffs_in_last((0,) * (self.arity - 1), 0, values)

    def partial_coeffs_in_last(
        self, av: tuple[int, ...], ax: int, values: Sequence[Fraction]
    ) -> tuple[Fraction, ...]:
        """Dense coefficients of y -> D^(av, ax) h(values, y), exactly."""
        if len(values) != self.arity - 1 or len(av) != self.arity - 1:
            raise ValueError("need one entry per parameter variable")
        vals = [Fraction(x) for x in values]
        top = self.degree_in(self.arity - 1)
        out = [Fraction(0)] * (top + 1)
        for mono, coef in self.monomials.items():
            ey = mono[-1]
            if ax > ey or any(k > e for e, k in zip(mono[:-1], av)):
                continue
            val = coef * _falling(ey, ax)
            for x, e, k in zip(vals, mono[:-1], av):
                val *= _falling(e, k) * x ** (e - k)
            out[ey - ax] += val
        while out and out[-1] == 0:
            out.pop()
        return tuple(out)


class CallablePartialOracle(PartialOracle):
    def __init__(self, arity: int, partial_fn, identifier: str = "custom",
                 degrees: Sequence[int] | None = None):
        self.arity = arity
        self._fn = partial_fn
        self.identifier = identifier
        self._degrees = tuple(degrees) if degrees is not None else None

    def partial(self, index, point):
        return self._fn(tuple(index), tuple(point))

    def degree_in(self, var: int) -> Optional[int]:
        return self._degrees[var] if self._degrees is not None else None


def univariate_as_partial(f: DerivativeOracle) -> PartialOracle:
    """View a univariate oracle as a 1-ary partial oracle."""
    return CallablePartialOracle(
        1, lambda idx, pt: f.derivative(idx[0], pt[0]), identifier=f.identifier
    )


# -- integration --------------------------------------------------------------


class IntegralOracle:
    """Supplies definite integrals of coefficient oracles over [u0, u1]."""

    def integral(self, oracle: DerivativeOracle, u0, u1):
        raise NotImplementedError


class PolynomialIntegral(IntegralOracle):
    """Exact antiderivative evaluation; only polynomial oracles accepted."""

    def integral(self, oracle: DerivativeOracle, u0, u1):
        if not isinstance(oracle, PolynomialOracle):
            raise FermatError(
                f"no closed-form integral for oracle {oracle.identifier!r}"
            )
        anti = oracle.antiderivative()
        return anti.derivative(0, u1) - anti.derivative(0, u0)


class DeclaredIntegral(IntegralOracle):
    """Integrals known by declaration (e.g. normalized bump functions),
    keyed by oracle identifier; falls back to exact polynomial integration."""

    def __init__(self, declared: dict):
        self.declared = dict(declared)
        self._poly = PolynomialIntegral()

    def integral(self, oracle: DerivativeOracle, u0, u1):
        if oracle.identifier in self.declared:
            value = self.declared[oracle.identifier]
            return value(u0, u1) if callable(value) else value
        return self._poly.integral(oracle, u0, u1)


def oracle_from_descriptor(text: str) -> DerivativeOracle:
    """Resolve the CLI constructor syntax: poly:[c0,c1,...], powint:n,
    sin, cos, exp, log."""
    text = text.strip()
    if text == "sin":
        return SinOracle()
    if text == "cos":
        return CosOracle()
    if text == "exp":
        return ExpOracle()
    if text == "log":
        return LogOracle()
    if text.startswith("powint:"):
        return power_oracle(int(text.split(":", 1)[1]))
    if text.startswith("poly:"):
        body = text.split(":", 1)[1].strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise FermatError(f"malformed poly descriptor {text!r}")
        inner = body[1:-1].strip()
        coeffs = [Fraction(p.strip()) for p in inner.split(",")] if inner else []
        return PolynomialOracle(coeffs)
    raise FermatError(f"unknown oracle descriptor {text!r}")
