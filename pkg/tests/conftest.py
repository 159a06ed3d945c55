"""Shared generators and independent cross-check oracles.

The oracles here deliberately do not reuse the library's code paths: the
convolution reference multiplies without truncating and filters afterwards,
and the polynomial differentiators work on raw coefficient containers.
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from fermatreals import BIGFLOAT, EXACT, FermatReal
from fermatreals.scalars import set_precision

# every exponent p/q in (0, 1] with denominator at most 12
EXPONENT_POOL = sorted(
    {Fraction(p, q) for q in range(1, 13) for p in range(1, q + 1)}
)


@pytest.fixture(autouse=True)
def _default_precision():
    set_precision(50)
    yield


def random_fermat(
    rng: random.Random,
    max_terms: int = 4,
    coef_bound: int = 10,
    field=EXACT,
    real_part: bool = True,
    exponents=None,
) -> FermatReal:
    pool = exponents if exponents is not None else EXPONENT_POOL
    std = Fraction(0)
    if real_part:
        std = Fraction(rng.randint(-coef_bound, coef_bound), rng.randint(1, 3))
    n = rng.randint(0, max_terms)
    exps = rng.sample(pool, min(n, len(pool)))
    terms = []
    for e in exps:
        c = 0
        while c == 0:
            c = rng.randint(-coef_bound, coef_bound)
        terms.append((e, Fraction(c, rng.randint(1, 3))))
    return FermatReal.from_terms(std, terms, field)


def random_infinitesimal(rng, max_terms=3, coef_bound=6, exponents=None) -> FermatReal:
    return random_fermat(
        rng, max_terms=max_terms, coef_bound=coef_bound,
        real_part=False, exponents=exponents,
    )


def to_float_value(x: FermatReal) -> FermatReal:
    return FermatReal.from_terms(x.std, x.terms, BIGFLOAT)


# -- independent reference oracles ---------------------------------------------


def convolution_reference(x: FermatReal, y: FermatReal):
    """Full untruncated term convolution, then the degree-1 filter.

    Returns (std, kept_terms, dropped_terms): the expected product parts and
    the (exponent, coefficient) pairs the truncation discards.
    """
    ax = [(Fraction(0), x.std)] + list(x.terms)
    ay = [(Fraction(0), y.std)] + list(y.terms)
    acc: dict[Fraction, Fraction] = {}
    for e1, c1 in ax:
        for e2, c2 in ay:
            e = e1 + e2
            acc[e] = acc.get(e, Fraction(0)) + c1 * c2
    std = acc.pop(Fraction(0), Fraction(0))
    kept = sorted(
        (e, c) for e, c in acc.items() if e <= 1 and c != 0
    )
    dropped = sorted((e, c) for e, c in acc.items() if e > 1 and c != 0)
    return std, kept, dropped


def dpoly(coeffs, n: int = 1):
    """n-th derivative of a dense coefficient list (independent of the
    library's polynomial oracle)."""
    out = list(coeffs)
    for _ in range(n):
        out = [k * c for k, c in enumerate(out)][1:]
    return out


def epoly(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def dmpoly(monomials: dict, index) -> dict:
    """Mixed partial of a monomial-exponent map, independent implementation."""
    out = {}
    for mono, coef in monomials.items():
        factor = Fraction(1)
        new = []
        ok = True
        for e, k in zip(mono, index):
            if k > e:
                ok = False
                break
            for i in range(k):
                factor *= e - i
            new.append(e - k)
        if ok and factor != 0:
            key = tuple(new)
            out[key] = out.get(key, Fraction(0)) + coef * factor
    return {m: c for m, c in out.items() if c != 0}


def empoly(monomials: dict, point) -> Fraction:
    total = Fraction(0)
    for mono, coef in monomials.items():
        v = Fraction(coef)
        for x, e in zip(point, mono):
            v *= Fraction(x) ** e
        total += v
    return total


def compose_poly(outer, inner):
    """Coefficients of outer(inner(u)) via Horner on coefficient lists."""
    result = [Fraction(0)]
    for c in reversed(outer):
        # result = result * inner + c
        prod = [Fraction(0)] * (len(result) + len(inner) - 1 if result and inner else 1)
        for i, a in enumerate(result):
            if a == 0:
                continue
            for j, b in enumerate(inner):
                prod[i + j] += a * b
        if not prod:
            prod = [Fraction(0)]
        prod[0] += c
        result = prod
    while len(result) > 1 and result[-1] == 0:
        result.pop()
    return result
