"""Extending smooth functions to the ring by truncated Taylor expansion.

The extension of f at x = a + dx is the finite sum

    sum_{i=0..K} f^(i)(a)/i! * dx**i,      K = nilpotency_index(x) - 1,

since dx**(K+1) = 0.  Multivariate extension runs over multi-indices with
nonvanishing infinitesimal powers.  A function with an infinitesimal
parameter collapses to its canonical form: a finite sum of coefficient
oracles times powers of t (:class:`QSFunction`), obtained by grouping the
parameter's Taylor expansion by the exponents of its powers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import FermatReal, shift_by_t_power
from .errors import FermatError
from .oracles import (
    DerivativeOracle,
    IntegralOracle,
    MultiPolynomialOracle,
    PartialOracle,
)
from .scalars import EXACT


def fermat_extend(f: DerivativeOracle, x: FermatReal) -> FermatReal:
    """Value of the extension of f at x; agrees with f on real points."""
    field = x.field
    a = x.std
    k = x.nilpotency_index() - 1
    if k == 0:
        return FermatReal(field.convert(f.derivative(0, a)), (), field)
    dx = x.infinitesimal_part()
    # Horner over the truncated Taylor polynomial in dx.
    acc = FermatReal.real(
        Fraction(1, math.factorial(k)) * f.derivative(k, a), field
    )
    for i in range(k - 1, -1, -1):
        coef = Fraction(1, math.factorial(i)) * f.derivative(i, a)
        acc = acc * dx + FermatReal.real(coef, field)
    return acc


def _power_table(dx: FermatReal, top: int) -> list[FermatReal]:
    powers = [FermatReal.real(1, dx.field)]
    for _ in range(top):
        nxt = powers[-1] * dx
        powers.append(nxt)
        if nxt.is_zero():
            break
    return powers


def fermat_extend_multi(h: PartialOracle, xs: Sequence[FermatReal]) -> FermatReal:
    """Multivariate Taylor extension at a tuple of ring points."""
    xs = tuple(xs)
    if len(xs) != h.arity:
        raise ValueError(f"expected {h.arity} arguments, got {len(xs)}")
    field = xs[0].field
    point = tuple(x.std for x in xs)
    tables = [_power_table(x.infinitesimal_part(), x.nilpotency_index() - 1) for x in xs]
    total = FermatReal.real(0, field)
    ranges = [range(len(tb)) for tb in tables]
    for index in itertools.product(*ranges):
        dpow = FermatReal.real(1, field)
        for tb, i in zip(tables, index):
            if i:
                dpow = dpow * tb[i]
        if dpow.is_zero():
            continue
        weight = Fraction(1)
        for i in index:
            weight /= math.factorial(i)
        value = h.partial(index, point)
        total = total + dpow.scale(weight * value)
    return total


@dataclass(frozen=True)
class QSFunction:
    """Canonical form of a quasi-standard smooth function: an ordered sum
    of coefficient oracles times t-powers, exponents in [0, 1] strictly
    increasing (exponent 0 is the parameter-free part)."""

    terms: tuple  # tuple[(Fraction, DerivativeOracle), ...]

    def __post_init__(self):
        exps = [e for e, _ in self.terms]
        if any(e < 0 or e > 1 for e in exps):
            raise ValueError("exponents must lie in [0, 1]")
        if any(b <= a for a, b in zip(exps, exps[1:])):
            raise ValueError("exponents must be strictly increasing")

    def coefficient(self, exponent) -> DerivativeOracle | None:
        e = Fraction(exponent)
        for te, oracle in self.terms:
            if te == e:
                return oracle
        return None

    def exponents(self) -> tuple:
        return tuple(e for e, _ in self.terms)


class _SliceOracle(DerivativeOracle):
    """x -> D^(iv, n) h(v0, x) for a fixed parameter multi-index iv."""

    def __init__(self, h: PartialOracle, v0: tuple, iv: tuple):
        self.h = h
        self.v0 = v0
        self.iv = iv
        self.identifier = f"{h.identifier}|D{iv}@{v0}"

    def derivative(self, n: int, a):
        return self.h.partial((*self.iv, n), (*self.v0, a))


class _LinearComboOracle(DerivativeOracle):
    """Finite scalar-linear combination of oracles."""

    def __init__(self, parts: Sequence[tuple], identifier: str = "combo"):
        self.parts = tuple(parts)  # (scalar weight, oracle)
        self.identifier = identifier

    def derivative(self, n: int, a):
        it = iter(self.parts)
        w0, o0 = next(it)
        total = w0 * o0.derivative(n, a)
        for w, o in it:
            total = total + w * o.derivative(n, a)
        return total


def expand_parametric(
    h: PartialOracle,
    v: Sequence[FermatReal],
    base_point: tuple | None = None,
) -> QSFunction:
    """Canonical form of x -> h(v, x) for a fixed infinitesimal-parameter
    tuple v; the last variable of h stays free.

    Taylor-expands h in the parameters around their standard parts and
    groups (1/i!) (dv)**i by the exponents of its decomposition, so each
    coefficient is a scalar-linear combination of parameter-partial slices.
    ``eval_qs`` of the result reproduces ``fermat_extend_multi``.
    """
    v = tuple(v)
    if len(v) != h.arity - 1:
        raise ValueError(f"expected {h.arity - 1} parameter components")
    v0 = tuple(p.std for p in v)
    if base_point is not None and tuple(base_point) != v0:
        raise ValueError(f"parameter standard part {v0} != declared {base_point}")
    tables = [_power_table(p.infinitesimal_part(), p.nilpotency_index() - 1) for p in v]

    v0_exact = None
    if isinstance(h, MultiPolynomialOracle):
        from .scalars import mpf_to_fraction

        v0_exact = tuple(
            s if isinstance(s, Fraction) else mpf_to_fraction(s) for s in v0
        )

    groups: dict[Fraction, list[tuple]] = {}
    for index in itertools.product(*[range(len(tb)) for tb in tables]):
        if v and index:
            dpow = tables[0][index[0]]
            for tb, i in zip(tables[1:], index[1:]):
                dpow = dpow * tb[i]
        else:
            dpow = FermatReal.real(1, v[0].field if v else EXACT)
        if dpow.is_zero():
            continue
        if v0_exact is not None and not h.partial_coeffs_in_last(index, 0, v0_exact):
            continue  # this coefficient slice is identically zero
        weight = Fraction(1)
        for i in index:
            weight /= math.factorial(i)
        slice_oracle = _SliceOracle(h, v0, index)
        entries = list(dpow.terms)
        if not dpow.field.is_zero(dpow.std):
            entries.append((Fraction(0), dpow.std))
        for e, c in entries:
            groups.setdefault(e, []).append((c * weight, slice_oracle))

    terms = []
    for e in sorted(groups):
        parts = groups[e]
        oracle = parts[0][1] if len(parts) == 1 and parts[0][0] == 1 else _LinearComboOracle(parts)
        terms.append((e, oracle))
    return QSFunction(tuple(terms))


def eval_qs(f: QSFunction, x: FermatReal) -> FermatReal:
    """sum of extend(coefficient, x) * t**exponent, normalized."""
    total = FermatReal.real(0, x.field)
    for e, oracle in f.terms:
        total = total + shift_by_t_power(fermat_extend(oracle, x), e)
    return total


def integrate_qs(f: QSFunction, u0, u1, integrals: IntegralOracle,
                 field=EXACT) -> FermatReal:
    """Termwise definite integral over real bounds u0 < u1."""
    if not u0 < u1:
        raise ValueError("need u0 < u1")
    raw = [(e, integrals.integral(oracle, u0, u1)) for e, oracle in f.terms]
    return FermatReal.from_terms(0, raw, field)


# -- derivative extraction ----------------------------------------------------


def separating_exponents(j: Sequence[int]) -> tuple[Fraction, ...]:
    """Positive rational exponents a with sum(j[l]*a[l]) == 1 and no other
    natural multi-index s with sum(s[l]*a[l]) <= 1 hitting 1 exactly.

    Perturbs the all-ones vector by B-adic digits (which makes equal-degree
    collisions impossible) and rescales; components outside the support of
    j may exceed 1, in which case they are replaced by verified small
    substitutes (their perturbations truncate away regardless).
    """
    j = tuple(int(x) for x in j)
    if not j or all(x == 0 for x in j):
        raise ValueError("j must be a nonzero natural multi-index")
    if any(x < 0 for x in j):
        raise ValueError("j must be componentwise nonnegative")
    m = len(j)
    total = sum(j)
    base = total + 1
    big_n = total * base**m + 1
    raw = [1 + Fraction(base**l, big_n) for l in range(m)]
    scale = sum(jl * al for jl, al in zip(j, raw))
    a = [al / scale for al in raw]

    # Off-support components may have been rescaled past 1; swap in a safe
    # small value, verified against every achievable sum.
    candidates = (Fraction(2, q) for q in itertools.count(5, 2))
    for l in range(m):
        if j[l] == 0 and a[l] > 1:
            for cand in candidates:
                a[l] = cand
                if _no_foreign_hit(a, j):
                    break
    assert _no_foreign_hit(a, j), "separating exponent construction failed"
    return tuple(a)


def _no_foreign_hit(a: Sequence[Fraction], j: Sequence[int]) -> bool:
    """Exhaustively check that only s == j reaches sum(s*a) == 1."""
    target = Fraction(1)

    def rec(idx: int, acc: Fraction, s: list[int]) -> bool:
        if acc > target:
            return True
        if idx == len(a):
            return acc != target or tuple(s) == tuple(j)
        k = 0
        while acc + k * a[idx] <= target:
            s.append(k)
            if not rec(idx + 1, acc + k * a[idx], s):
                return False
            s.pop()
            k += 1
        return True

    return rec(0, Fraction(0), [])


def extract_derivative(f, x0, j):
    """Recover a true (mixed) partial derivative from one ring evaluation.

    Evaluates the extension at x0 + sum(t**a_l * e_l) with separating
    exponents a = a(j), reads the coefficient of t**1, and multiplies by j!.
    """
    if isinstance(f, DerivativeOracle):
        j_t = (int(j),) if isinstance(j, int) else tuple(j)
        if len(j_t) != 1:
            raise ValueError("univariate oracle takes a single order")
        x0_t = (x0,) if not isinstance(x0, (tuple, list)) else tuple(x0)
        value = _perturbed_value_uni(f, x0_t[0], j_t[0])
    else:
        j_t = tuple(int(x) for x in j)
        x0_t = tuple(x0)
        if len(j_t) != f.arity or len(x0_t) != f.arity:
            raise ValueError("arity mismatch")
        value = _perturbed_value_multi(f, x0_t, j_t)
    fact = 1
    for k in j_t:
        fact *= math.factorial(k)
    return value.coefficient(Fraction(1)) * fact


def _perturbed_value_uni(f: DerivativeOracle, x0, order: int) -> FermatReal:
    if order <= 0:
        raise ValueError("derivative order must be positive")
    field = EXACT if isinstance(x0, Fraction) else _float_field()
    (a,) = separating_exponents((order,))
    x = FermatReal.real(x0, field) + FermatReal.t_power(a, 1, field)
    return fermat_extend(f, x)


def _perturbed_value_multi(h: PartialOracle, x0: tuple, j: tuple) -> FermatReal:
    exps = separating_exponents(j)
    field = EXACT if all(isinstance(c, Fraction) for c in x0) else _float_field()
    args = []
    for c, a in zip(x0, exps):
        base = FermatReal.real(c, field)
        if a <= 1:
            base = base + FermatReal.t_power(a, 1, field)
        args.append(base)
    return fermat_extend_multi(h, args)


def _float_field():
    from .scalars import BIGFLOAT

    return BIGFLOAT
