"""Dense univariate polynomials over the rationals: Sturm sequences, real
root isolation, and exact sign queries at isolated algebraic points.

Polynomials are tuples of Fractions in ascending power order.  Root
isolation returns exact Fractions for rational roots (recovered via
continued-fraction search inside the isolating interval) and
:class:`AlgebraicPoint` objects for the rest.  An AlgebraicPoint supports
exact vanishing tests (through gcd with the defining polynomial) and exact
sign computation of any rational polynomial at the point (through interval
refinement), so downstream classification never needs floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import ComparisonUndecided

Poly = tuple  # tuple[Fraction, ...], ascending powers

DEFAULT_ISOLATION_WIDTH = Fraction(1, 2**20)
_MAX_REFINE_WIDTH = Fraction(1, 2**200)


def poly_trim(p: Sequence[Fraction]) -> Poly:
    coeffs = list(p)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def poly_degree(p: Poly) -> int:
    return len(p) - 1


def poly_eval(p: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_derivative(p: Poly) -> Poly:
    return poly_trim([c * k for k, c in enumerate(p)][1:])


def poly_neg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def poly_sub(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return poly_trim(
        [(p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n)]
    )


def poly_mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly_trim(out)


def poly_scale(p: Poly, s: Fraction) -> Poly:
    return poly_trim([c * s for c in p])


def poly_divmod(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    quo = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    dq = len(q) - 1
    lead = q[-1]
    while len(rem) - 1 >= dq and any(c != 0 for c in rem):
        while rem and rem[-1] == 0:
            rem.pop()
        if len(rem) - 1 < dq:
            break
        k = len(rem) - 1 - dq
        f = rem[-1] / lead
        quo[k] = f
        for i, c in enumerate(q):
            rem[k + i] -= f * c
        rem.pop()
    return poly_trim(quo), poly_trim(rem)


def poly_monic(p: Poly) -> Poly:
    if not p:
        return p
    return tuple(c / p[-1] for c in p)


def poly_gcd(p: Poly, q: Poly) -> Poly:
    a, b = poly_trim(p), poly_trim(q)
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    return poly_monic(a)


def poly_squarefree(p: Poly) -> Poly:
    p = poly_trim(p)
    if poly_degree(p) < 1:
        return p
    g = poly_gcd(p, poly_derivative(p))
    if poly_degree(g) < 1:
        return p
    q, _ = poly_divmod(p, g)
    return q


def sturm_chain(p: Poly) -> list[Poly]:
    chain = [poly_trim(p), poly_derivative(p)]
    while chain[-1]:
        _, r = poly_divmod(chain[-2], chain[-1])
        if not r:
            break
        chain.append(poly_neg(r))
    return [c for c in chain if c]


def _sign_at(p: Poly, x) -> int:
    """Sign of p at x, with x a Fraction or +-inf (the strings '+', '-')."""
    if x == "+":
        v = p[-1] if p else Fraction(0)
    elif x == "-":
        v = p[-1] * (-1) ** poly_degree(p) if p else Fraction(0)
    else:
        v = poly_eval(p, x)
    return (v > 0) - (v < 0)


def _variations(chain: list[Poly], x) -> int:
    signs = [s for s in (_sign_at(p, x) for p in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p: Poly, lo, hi) -> int:
    """Distinct real roots of p in (lo, hi]; lo/hi may be None for +-inf.

    The polynomial need not be square-free; multiplicity is collapsed.
    """
    sf = poly_squarefree(p)
    if poly_degree(sf) < 1:
        return 0
    chain = sturm_chain(sf)
    a = "-" if lo is None else lo
    b = "+" if hi is None else hi
    return _variations(chain, a) - _variations(chain, b)


def cauchy_root_bound(p: Poly) -> Fraction:
    p = poly_trim(p)
    if poly_degree(p) < 1:
        return Fraction(1)
    lead = abs(p[-1])
    return 1 + max(abs(c) / lead for c in p[:-1])


def simplest_in_interval(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational with smallest denominator strictly inside (lo, hi)."""
    if not lo < hi:
        raise ValueError("empty interval")
    # Walk the Stern-Brocot tree via continued fractions.
    if hi <= 0:
        return -simplest_in_interval(-hi, -lo)
    if lo < 0:
        return Fraction(0)
    # now 0 <= lo < hi
    fl = lo.numerator // lo.denominator
    if fl + 1 < hi:
        return Fraction(fl + 1)
    if lo == fl:
        # (fl, hi) with hi - fl <= 1: fl + 1/k for the least k with 1/k < hi - fl
        inv = 1 / (hi - fl)
        k = inv.numerator // inv.denominator + 1
        return fl + Fraction(1, k)
    inner = simplest_in_interval(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / inner


class AlgebraicPoint:
    """A real algebraic number given by a square-free defining polynomial
    and an open isolating interval containing exactly one of its roots."""

    __slots__ = ("poly", "lo", "hi")

    def __init__(self, poly: Poly, lo: Fraction, hi: Fraction):
        self.poly = poly_trim(poly)
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)

    def __repr__(self) -> str:
        mid = (self.lo + self.hi) / 2
        return f"AlgebraicPoint(~{float(mid):.6g} in ({self.lo}, {self.hi}))"

    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def refine(self, target_width: Fraction) -> None:
        """Shrink the isolating interval by bisection (in place)."""
        p = self.poly
        flo = poly_eval(p, self.lo)
        while self.hi - self.lo > target_width:
            mid = (self.lo + self.hi) / 2
            fmid = poly_eval(p, mid)
            if fmid == 0:
                # land just off the root so the interval stays open
                off = (self.hi - self.lo) / 4
                self.lo, self.hi = mid - off, mid + off
                flo = poly_eval(p, self.lo)
                continue
            if (flo < 0) == (fmid < 0):
                self.lo, flo = mid, fmid
            else:
                self.hi = mid

    def vanishes(self, q: Poly) -> bool:
        """Exact test of q(self) == 0."""
        q = poly_trim(q)
        if not q:
            return True
        g = poly_gcd(self.poly, q)
        if poly_degree(g) < 1:
            return False
        return count_roots(g, self.lo, self.hi) > 0

    def sign_of(self, q: Poly) -> int:
        """Exact sign of q(self): -1, 0 or 1."""
        if self.vanishes(q):
            return 0
        q = poly_trim(q)
        while True:
            lo_v, hi_v = _interval_eval(q, self.lo, self.hi)
            if lo_v > 0:
                return 1
            if hi_v < 0:
                return -1
            if self.width() < _MAX_REFINE_WIDTH:  # pragma: no cover - guard
                raise ComparisonUndecided(f"sign of polynomial at {self!r}")
            self.refine(self.width() / 16)

    def compare_rational(self, x: Fraction) -> int:
        """Sign of (self - x)."""
        if self.vanishes((Fraction(-x), Fraction(1))):
            return 0
        while self.lo < x < self.hi:
            self.refine(self.width() / 16)
        return -1 if self.hi <= x else 1


def _interval_eval(p: Poly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Interval-arithmetic Horner bound of p over [lo, hi]."""
    a, b = Fraction(0), Fraction(0)
    for c in reversed(p):
        products = (a * lo, a * hi, b * lo, b * hi)
        a, b = c + min(products), c + max(products)
    return a, b


RootLocation = "Fraction | AlgebraicPoint"


def _root_key(r) -> Fraction:
    return r if isinstance(r, Fraction) else r.midpoint()


def isolate_roots(
    p: Sequence,
    lo=None,
    hi=None,
    width: Fraction = DEFAULT_ISOLATION_WIDTH,
) -> list:
    """Isolate the distinct real roots of p on the open interval (lo, hi).

    Roots that are rational are returned as exact Fractions (found via the
    simplest-rational search once the isolating interval is narrow); the
    rest come back as AlgebraicPoint objects of width <= `width`.
    Multiplicities are collapsed.  `lo`/`hi` of None mean unbounded.
    """
    p = poly_trim([Fraction(c) for c in p])
    if poly_degree(p) < 1:
        if not p:
            raise ValueError("cannot isolate roots of the zero polynomial")
        return []
    sf = poly_squarefree(p)
    chain = sturm_chain(sf)

    # Bracket all roots; the Cauchy bound guarantees root-free endpoints.
    bound = cauchy_root_bound(sf) + 1
    blo, bhi = -bound, bound

    def var(x):
        return _variations(chain, x)

    found: list = []

    def recurse(a: Fraction, b: Fraction, n: int) -> None:
        if n == 0:
            return
        if n == 1:
            found.append(_polish(sf, a, b, width))
            return
        mid = (a + b) / 2
        if poly_eval(sf, mid) != 0:
            recurse(a, mid, var(a) - var(mid))
            recurse(mid, b, var(mid) - var(b))
            return
        found.append(mid)
        # Shrink the excluded window around mid until the side counts
        # certify that no other root was swallowed.
        eps = (b - a) / 4
        while True:
            m_lo, m_hi = mid - eps, mid + eps
            if poly_eval(sf, m_lo) != 0 and poly_eval(sf, m_hi) != 0:
                n_lo = var(a) - var(m_lo)
                n_hi = var(m_hi) - var(b)
                if n_lo + n_hi == n - 1:
                    recurse(a, m_lo, n_lo)
                    recurse(m_hi, b, n_hi)
                    return
            eps /= 4

    recurse(blo, bhi, var(blo) - var(bhi))
    found.sort(key=_root_key)

    out = []
    for r in found:
        if isinstance(r, Fraction):
            if (lo is None or r > lo) and (hi is None or r < hi):
                out.append(r)
        else:
            if (lo is not None and r.compare_rational(lo) <= 0) or (
                hi is not None and r.compare_rational(hi) >= 0
            ):
                continue
            out.append(r)
    return out


def _polish(sf: Poly, a: Fraction, b: Fraction, width: Fraction):
    """Shrink a single-root bracket; return a Fraction when rational."""
    pt = AlgebraicPoint(sf, a, b)
    pt.refine(width)
    # A rational root is the simplest rational in a tight enough interval.
    for _ in range(3):
        cand = simplest_in_interval(pt.lo, pt.hi)
        if poly_eval(sf, cand) == 0:
            return cand
        pt.refine(pt.width() / 2**10)
    return pt
