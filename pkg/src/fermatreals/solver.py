"""Slice classification, the leading-term equation solver, solution
families, monotonicity verdicts, intermediate-value criteria, domain
splitting and interval extrema.

On the slice a + D_inf the extension of f is governed by the least order m
with a nonvanishing derivative at a and its sign: odd m covers the whole
slice f(a) + D_inf, even m covers the signed half, a flat point collapses
to {f(a)}.  The solver reproduces the constructive proof: step 1 matches
leading terms with an m-th root, every later step is linear, and the step
exponents increase strictly until the residual vanishes.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import mpmath

from .core import FermatReal
from .errors import (
    NoFiniteM,
    NoRealPreimage,
    NoRealRoot,
    NotInSliceImage,
    RootNotExact,
    SolverDiverged,
    StepCapExceeded,
    UnresolvedClassification,
)
from .extension import fermat_extend, fermat_extend_multi
from .oracles import DerivativeOracle, MultiPolynomialOracle, PartialOracle, PolynomialOracle
from .polyroots import (
    AlgebraicPoint,
    isolate_roots,
    poly_derivative,
    poly_eval,
    poly_sub,
    poly_trim,
    simplest_in_interval,
    _interval_eval,
)
from .scalars import BIGFLOAT, EXACT, mpf_to_fraction

DEFAULT_STEP_CAP = 10_000


# -- classification -----------------------------------------------------------


@dataclass(frozen=True)
class SliceClass:
    """Flat, or the least positive derivative order m and its sign."""

    kind: str  # "flat" | "odd" | "even"
    order: Optional[int] = None
    sign: int = 0

    @classmethod
    def flat(cls) -> "SliceClass":
        return cls("flat")

    @classmethod
    def from_order(cls, m: int, sign: int) -> "SliceClass":
        if m < 1 or sign == 0:
            raise ValueError("need m >= 1 and a nonzero sign")
        return cls("odd" if m % 2 else "even", m, sign)

    @property
    def is_flat(self) -> bool:
        return self.kind == "flat"

    @property
    def is_odd(self) -> bool:
        return self.kind == "odd"

    @property
    def is_even(self) -> bool:
        return self.kind == "even"


def _field_of_scalar(a):
    return EXACT if isinstance(a, Fraction) else BIGFLOAT


def classify_slice(f: DerivativeOracle, a, field=None) -> SliceClass:
    """Least nonvanishing derivative order at a, or the declared flatness."""
    if field is None:
        field = _field_of_scalar(a)
    if f.flat_at(a) is True:
        return SliceClass.flat()
    cap = f.search_cap
    if isinstance(f, PolynomialOracle):
        cap = min(cap, max(f.degree(), 1))
    for n in range(1, cap + 1):
        d = f.derivative(n, a)
        if not field.is_zero(d):
            return SliceClass.from_order(n, field.sign(d))
    raise UnresolvedClassification(
        f"no nonzero derivative of {f.identifier} at {a} within order {cap}"
    )


def slice_image_contains(f: DerivativeOracle, a, w: FermatReal) -> bool:
    """Does w lie in the image of the slice a + D_inf under the extension?"""
    field = w.field
    cls = classify_slice(f, a, field)
    fa = FermatReal.real(f.derivative(0, a), field)
    diff = w - fa
    if cls.is_flat:
        return diff.is_zero()
    if not field.is_zero(diff.std):
        return False
    if cls.is_odd or diff.is_zero():
        return True
    return field.sign(diff.leading()[1]) == cls.sign


# -- the leading-term solver --------------------------------------------------


def _solver_tolerance(field):
    if field is EXACT:
        return None
    return mpmath.mpf(10) ** -(mpmath.mp.dps // 2)


def _residual_is_zero(g: FermatReal, tol) -> bool:
    if tol is None:
        return g.is_zero()
    return abs(g.std) <= tol and all(abs(c) <= tol for _, c in g.terms)


def _leading_term_solve(
    value_at: Callable[[FermatReal], FermatReal],
    m: int,
    fm,
    base_real,
    w: FermatReal,
    *,
    negative_branch: bool = False,
    step_cap: int = DEFAULT_STEP_CAP,
) -> FermatReal:
    field = w.field
    tol = _solver_tolerance(field)
    base = FermatReal.real(base_real, field)
    g = w - value_at(base)
    if _residual_is_zero(g, tol):
        return base
    if not _residual_is_zero(FermatReal.real(g.std, field), tol):
        raise NotInSliceImage(
            f"target standard part {w.std} differs from the slice value"
        )

    # Step 1: an m-th root matches the leading terms.
    a1, w1 = g.leading()
    b1 = a1 / m
    rhs = math.factorial(m) * w1 / fm
    if m % 2 == 0 and field.sign(rhs) < 0:
        raise NotInSliceImage(
            f"even-order slice only reaches the sign of {fm}; got {w1}"
        )
    c1 = field.nth_root(rhs, m)
    if m % 2 == 0 and negative_branch:
        c1 = -c1
    c = base + FermatReal.t_power(b1, c1, field)
    prev_b = b1

    # Later steps are linear; exponents must increase strictly.
    lead_denom = fm * c1 ** (m - 1)
    for _ in range(step_cap):
        g = w - value_at(c)
        if _residual_is_zero(g, tol):
            return c
        g_exp, g_coef = g.leading()
        b_r = g_exp - (m - 1) * b1
        if b_r <= prev_b:
            raise SolverDiverged(
                f"step exponent {b_r} did not increase past {prev_b}"
            )
        c_r = math.factorial(m - 1) * g_coef / lead_denom
        c = c + FermatReal.t_power(b_r, c_r, field)
        prev_b = b_r
    raise StepCapExceeded(f"no fundamental solution within {step_cap} steps")


def solve_slice(
    f: DerivativeOracle,
    a,
    w: FermatReal,
    *,
    negative_branch: bool = False,
    step_cap: int = DEFAULT_STEP_CAP,
) -> FermatReal:
    """The fundamental solution of extend(f, x) = w with real part a.

    Even classifications return the nonnegative-root branch by default;
    pass negative_branch=True for the mirror fundamental solution.
    """
    field = w.field
    cls = classify_slice(f, a, field)
    fa = FermatReal.real(f.derivative(0, a), field)
    if cls.is_flat:
        if (w - fa).is_zero():
            return FermatReal.real(a, field)
        raise NotInSliceImage("a flat slice only attains its own value")
    fm = f.derivative(cls.order, a)
    return _leading_term_solve(
        lambda c: fermat_extend(f, c),
        cls.order,
        fm,
        a,
        w,
        negative_branch=negative_branch,
        step_cap=step_cap,
    )


def refine_to_fundamental(f: DerivativeOracle, y: FermatReal) -> FermatReal:
    """Strip the terms of a solution that any solution can carry: keep
    exactly those with (m-1)*a1 + a_i <= 1."""
    if y.is_real():
        return y
    cls = classify_slice(f, y.std, y.field)
    if cls.is_flat:
        raise UnresolvedClassification("no fundamental refinement at a flat point")
    m = cls.order
    a1 = y.leading()[0]
    kept = [(e, c) for e, c in y.terms if (m - 1) * a1 + e <= 1]
    return FermatReal(y.std, kept, y.field)


@dataclass(frozen=True)
class SolutionFamily:
    """Fundamental solution plus the exponent threshold: adding any z whose
    exponents all exceed the threshold yields exactly the other solutions
    with the same real part."""

    fundamental: FermatReal
    threshold: Fraction


def solution_family(
    f: DerivativeOracle,
    a,
    w: FermatReal,
    *,
    negative_branch: bool = False,
) -> SolutionFamily:
    fundamental = solve_slice(f, a, w, negative_branch=negative_branch)
    m = classify_slice(f, a, w.field).order
    if fundamental.is_real():
        threshold = Fraction(1, m)
    else:
        a1 = fundamental.leading()[0]
        threshold = 1 - (m - 1) * a1 if m * a1 <= 1 else Fraction(1, m)
    return SolutionFamily(fundamental, Fraction(threshold))


# -- monotonicity --------------------------------------------------------------


class Monotonicity(enum.Enum):
    STRICTLY_INCREASING = "strictly-increasing"
    INCREASING = "increasing"
    STRICTLY_DECREASING = "strictly-decreasing"
    DECREASING = "decreasing"
    UNKNOWN = "unknown"


def classify_monotone_global(f: DerivativeOracle, sample_grid: Sequence) -> Monotonicity:
    """Monotonicity verdict from slice classifications on a sample grid:
    a positive first derivative everywhere sampled gives the strict verdict,
    odd classifications of uniform sign give the non-strict one."""
    classes = [classify_slice(f, q) for q in sample_grid]
    if any(c.is_flat or c.is_even for c in classes):
        return Monotonicity.UNKNOWN
    signs = {c.sign for c in classes}
    if len(signs) != 1:
        return Monotonicity.UNKNOWN
    first_order = all(c.order == 1 for c in classes)
    if signs == {1}:
        return Monotonicity.STRICTLY_INCREASING if first_order else Monotonicity.INCREASING
    return Monotonicity.STRICTLY_DECREASING if first_order else Monotonicity.DECREASING


# -- intermediate value machinery ----------------------------------------------


def _x_order_at(h: PartialOracle, v0: tuple, x0, field) -> int:
    """Least m >= 1 with D^(0,m) h(v0, x0) != 0, bounded by the y-degree."""
    bound = h.degree_in(h.arity - 1)
    if bound is None:
        bound = 64
    zeros = (0,) * (h.arity - 1)
    for m_try in range(1, bound + 1):
        if not field.is_zero(h.partial((*zeros, m_try), (*v0, x0))):
            return m_try
    raise NoFiniteM(
        f"all derivatives of {h.identifier} in the last variable vanish at {x0}"
    )


def _param_bounds(h: PartialOracle, v: Sequence[FermatReal]) -> list[int]:
    bounds = []
    for idx, p in enumerate(v):
        b = p.nilpotency_index() - 1
        d = h.degree_in(idx)
        if d is not None:
            b = min(b, d)
        bounds.append(b)
    return bounds


def ivp_criterion_at(h: PartialOracle, v: Sequence[FermatReal], x0) -> bool:
    """The mixed-derivative criterion that keeps the pure x-term leading:
    every D^(a_v, a_x) h(v0, x0) with 0 < a_x < m must vanish."""
    v = tuple(v)
    field = _field_of_scalar(x0)
    v0 = tuple(p.std for p in v)
    m = _x_order_at(h, v0, x0, field)
    if m == 1:
        return True
    bounds = _param_bounds(h, v)
    for ax in range(1, m):
        for av in itertools.product(*[range(b + 1) for b in bounds]):
            if not any(av):
                continue  # a_v = 0 vanishes by minimality of m
            if not field.is_zero(h.partial((*av, ax), (*v0, x0))):
                return False
    return True


@dataclass(frozen=True)
class SplitResult:
    """Split points (exact rationals or isolated algebraic points) and the
    resulting open subintervals, whose closures cover the input."""

    split_points: tuple
    intervals: tuple  # ((lo, hi), ...) with None for an unbounded end


def _criterion_at_algebraic(
    h: MultiPolynomialOracle,
    v: Sequence[FermatReal],
    v0: tuple,
    pt: AlgebraicPoint,
) -> bool:
    base = h.substitute_prefix(v0)
    # least m with a nonvanishing m-th derivative at the point
    m = None
    d = poly_trim(base)
    for k in range(1, len(base)):
        d = poly_derivative(d) if k > 1 else poly_derivative(base)
        if not pt.vanishes(d):
            m = k
            break
    if m is None:
        raise NoFiniteM(f"flat polynomial slice at {pt!r}")
    if m == 1:
        return True
    bounds = _param_bounds(h, v)
    for ax in range(1, m):
        for av in itertools.product(*[range(b + 1) for b in bounds]):
            if not any(av):
                continue
            q = h.partial_coeffs_in_last(av, ax, v0)
            if q and not pt.vanishes(q):
                return False
    return True


def split_domain(
    h: PartialOracle,
    v: Sequence[FermatReal],
    interval: tuple = (None, None),
) -> SplitResult:
    """Split a real interval at the points where the intermediate-value
    criterion fails; on each remaining open piece the parametrized function
    has the intermediate value property.

    Candidates are the real zeros of the first x-derivative (elsewhere
    m = 1 and the criterion is vacuous).
    """
    v = tuple(v)
    lo, hi = interval
    v0_scalars = tuple(p.std for p in v)
    v0 = tuple(
        s if isinstance(s, Fraction) else mpf_to_fraction(s) for s in v0_scalars
    )
    if isinstance(h, MultiPolynomialOracle):
        base = h.substitute_prefix(v0)
    else:
        base = _reconstruct_slice_coeffs(h, v0)
    dbase = poly_derivative(poly_trim(base))
    if not dbase:
        return SplitResult((), ((lo, hi),))
    candidates = isolate_roots(dbase, lo, hi)

    split_points = []
    for r in candidates:
        if isinstance(r, Fraction):
            ok = ivp_criterion_at(h, v, r)
        else:
            if not isinstance(h, MultiPolynomialOracle):
                raise NotImplementedError(
                    "irrational split candidates need a polynomial oracle"
                )
            ok = _criterion_at_algebraic(h, v, v0, r)
        if not ok:
            split_points.append(r)

    cuts = [lo, *split_points, hi]
    intervals = tuple((cuts[i], cuts[i + 1]) for i in range(len(cuts) - 1))
    return SplitResult(tuple(split_points), intervals)


def _reconstruct_slice_coeffs(h: PartialOracle, v0: tuple) -> tuple:
    """Taylor coefficients of y -> h(v0, y) at 0 (exact for polynomials)."""
    bound = h.degree_in(h.arity - 1)
    if bound is None:
        raise NotImplementedError("need a degree bound in the last variable")
    zeros = (0,) * (h.arity - 1)
    origin = Fraction(0)
    return poly_trim(
        [
            Fraction(h.partial((*zeros, k), (*v0, origin)))
            / math.factorial(k)
            for k in range(bound + 1)
        ]
    )


def isolate_real_roots(p, interval: tuple = (None, None), width=None):
    """Disjoint isolating locations for the distinct real roots of p on an
    open interval: exact Fractions when rational, AlgebraicPoint otherwise."""
    if isinstance(p, PolynomialOracle):
        coeffs = p.coeffs
    else:
        coeffs = [Fraction(c) for c in p]
    kwargs = {"width": width} if width is not None else {}
    return isolate_roots(coeffs, interval[0], interval[1], **kwargs)


# -- IVP solving ---------------------------------------------------------------


def _as_fraction(s) -> Fraction:
    return s if isinstance(s, Fraction) else mpf_to_fraction(s)


def ivp_solve(
    f: DerivativeOracle,
    a: FermatReal,
    b: FermatReal,
    y: FermatReal,
    candidates: Sequence | None = None,
) -> FermatReal:
    """A point c with a <= c <= b and extend(f, c) = y, for y between the
    endpoint values; f must have no flat point between the real parts.

    Scans the real preimages of the standard part of y in ascending order
    and solves on the first admissible slice.
    """
    if not a < b:
        raise ValueError("need a < b")
    field = y.field
    fa = fermat_extend(f, a)
    fb = fermat_extend(f, b)
    if y == fa:
        return a
    if y == fb:
        return b
    lo_v, hi_v = (fa, fb) if fa < fb else (fb, fa)
    if not (lo_v < y < hi_v):
        raise NoRealPreimage(f"{y} is not between the endpoint values")

    if candidates is None:
        if not isinstance(f, PolynomialOracle):
            raise NotImplementedError(
                "supply candidate real preimages for non-polynomial oracles"
            )
        y0 = _as_fraction(y.std)
        shifted = list(f.coeffs) or [Fraction(0)]
        shifted[0] -= y0
        lo_r, hi_r = _as_fraction(a.std), _as_fraction(b.std)
        roots = isolate_roots(shifted, None, None)
        candidates = []
        for r in roots:
            if isinstance(r, Fraction):
                if lo_r <= r <= hi_r:
                    candidates.append(r)
            else:
                if r.compare_rational(lo_r) >= 0 and r.compare_rational(hi_r) <= 0:
                    candidates.append(r)

    last_exact_error = None
    for r in candidates:
        if isinstance(r, AlgebraicPoint):
            if field is EXACT:
                last_exact_error = RootNotExact(
                    f"candidate preimage {r!r} is irrational"
                )
                continue
            r.refine(Fraction(1, 10 ** (mpmath.mp.dps + 5)))
            r_scalar = field.convert(r.midpoint())
        else:
            r_scalar = r if field is EXACT else field.convert(r)
        try:
            if not slice_image_contains(f, r_scalar, y):
                continue
            c = solve_slice(f, r_scalar, y)
            if a < c < b:
                return c
            if classify_slice(f, r_scalar, field).is_even:
                c2 = solve_slice(f, r_scalar, y, negative_branch=True)
                if a < c2 < b:
                    return c2
        except RootNotExact as exc:
            last_exact_error = exc
            continue
    if last_exact_error is not None:
        raise last_exact_error
    raise NoRealPreimage(f"no admissible slice for {y} in ({a}, {b})")


# -- extrema -------------------------------------------------------------------


@dataclass(frozen=True)
class ExtremaResult:
    minimum: FermatReal
    maximum: FermatReal
    argmin: object  # FermatReal endpoint, or a real critical point
    argmax: object


class _AlgebraicValue:
    """The real number p(c) for an isolated algebraic point c."""

    __slots__ = ("point", "poly")

    def __init__(self, point: AlgebraicPoint, poly: tuple):
        self.point = point
        self.poly = poly_trim(poly)

    def value_interval(self) -> tuple[Fraction, Fraction]:
        return _interval_eval(self.poly, self.point.lo, self.point.hi)

    def rational_value(self) -> Optional[Fraction]:
        """Exact rational value, when the value happens to be rational."""
        self.point.refine(self.point.width() / 2**8)
        for _ in range(4):
            lo, hi = self.value_interval()
            if lo == hi:
                return lo
            cand = simplest_in_interval(lo, hi)
            if self.point.vanishes(poly_sub(self.poly, (cand,))):
                return cand
            self.point.refine(self.point.width() / 2**16)
        return None


def _cmp_values(u, v) -> int:
    """Sign of u - v over FermatReal and _AlgebraicValue operands."""
    if isinstance(u, FermatReal) and isinstance(v, FermatReal):
        return u.compare(v).value
    if isinstance(u, _AlgebraicValue) and isinstance(v, FermatReal):
        return -_cmp_values(v, u)
    if isinstance(u, FermatReal) and isinstance(v, _AlgebraicValue):
        q = _as_fraction(u.std)
        s = v.point.sign_of(poly_sub(v.poly, (q,)))  # sign of value - std
        if s != 0:
            return -s
        if not u.terms:
            return 0
        return u.field.sign(u.leading()[1])
    # two algebraic values: separate their value intervals
    for _ in range(40):
        alo, ahi = u.value_interval()
        blo, bhi = v.value_interval()
        if ahi < blo:
            return -1
        if bhi < alo:
            return 1
        u.point.refine(u.point.width() / 2**8)
        v.point.refine(v.point.width() / 2**8)
    return 0  # indistinguishable after deep refinement: treat as equal


def _realize_value(val, field) -> FermatReal:
    if isinstance(val, FermatReal):
        return val
    q = val.rational_value()
    if q is not None:
        return FermatReal.real(q, field)
    if field is EXACT:
        raise RootNotExact("the extremum value is irrational")
    val.point.refine(Fraction(1, 10 ** (mpmath.mp.dps + 5)))
    lo, hi = val.value_interval()
    return FermatReal.real(field.convert((lo + hi) / 2), field)


def extrema_on_interval(
    f: PolynomialOracle, a: FermatReal, b: FermatReal
) -> ExtremaResult:
    """Minimum and maximum of the extension on [a, b], with witnesses.

    Candidates are the endpoint values plus the real values at interior
    critical points whose classification makes them local minima (for the
    minimum) or maxima (for the maximum); the dictionary order picks the
    winners.
    """
    if not a < b:
        raise ValueError("need a < b")
    if not isinstance(f, PolynomialOracle):
        raise NotImplementedError("extrema need a polynomial oracle")
    field = a.field
    endpoints = [(fermat_extend(f, a), a), (fermat_extend(f, b), b)]
    min_cands = list(endpoints)
    max_cands = list(endpoints)

    lo_r, hi_r = _as_fraction(a.std), _as_fraction(b.std)
    if lo_r < hi_r:
        dcoeffs = poly_derivative(f.coeffs)
        for r in isolate_roots(dcoeffs, lo_r, hi_r) if dcoeffs else []:
            if isinstance(r, Fraction):
                cls = classify_slice(f, r, EXACT)
                value = FermatReal.real(field.convert(f.derivative(0, r)), field)
            else:
                cls = _classify_poly_at_algebraic(f.coeffs, r)
                value = _AlgebraicValue(r, f.coeffs)
            if cls.is_even and cls.sign > 0:
                min_cands.append((value, r))
            elif cls.is_even and cls.sign < 0:
                max_cands.append((value, r))

    def pick(cands, want_min: bool):
        best_v, best_w = cands[0]
        for v, wit in cands[1:]:
            c = _cmp_values(v, best_v)
            if (c < 0) if want_min else (c > 0):
                best_v, best_w = v, wit
        return _realize_value(best_v, field), best_w

    min_value, argmin = pick(min_cands, True)
    max_value, argmax = pick(max_cands, False)
    return ExtremaResult(min_value, max_value, argmin, argmax)


def _classify_poly_at_algebraic(coeffs: tuple, pt: AlgebraicPoint) -> SliceClass:
    d = poly_trim(coeffs)
    for k in range(1, len(coeffs)):
        d = poly_derivative(d)
        if not pt.vanishes(d):
            return SliceClass.from_order(k, pt.sign_of(d))
    raise UnresolvedClassification("zero polynomial has no classification")


# -- parametrized slices -------------------------------------------------------


def qs_solve_slice(
    h: PartialOracle,
    v: Sequence[FermatReal],
    x0,
    w: FermatReal,
    *,
    negative_branch: bool = False,
    step_cap: int = DEFAULT_STEP_CAP,
) -> FermatReal:
    """Leading-term solving of h(v, y) = w on the slice x0 + D_inf, with a
    fixed infinitesimal parameter tuple v.

    When the mixed-derivative criterion fails at x0 the pure x-term need
    not lead, and the step exponents can stop increasing; that surfaces as
    SolverDiverged (no fundamental solution on this slice).
    """
    v = tuple(v)
    field = w.field
    v0 = tuple(p.std for p in v)
    m = _x_order_at(h, v0, x0, field)
    fm = h.partial(((0,) * len(v)) + (m,), (*v0, x0))
    return _leading_term_solve(
        lambda c: fermat_extend_multi(h, (*v, c)),
        m,
        fm,
        x0,
        w,
        negative_branch=negative_branch,
        step_cap=step_cap,
    )


def qs_slice_image_contains(
    h: PartialOracle, v: Sequence[FermatReal], x0, w: FermatReal
) -> bool:
    """Slice membership for a parametrized function.

    When the mixed-derivative criterion holds, the slice image theorem
    applies verbatim around the slice value; otherwise fall back to running
    the solver and report whether it finds a solution.
    """
    v = tuple(v)
    field = w.field
    v0 = tuple(p.std for p in v)
    base = fermat_extend_multi(h, (*v, FermatReal.real(x0, field)))
    diff = w - base
    if ivp_criterion_at(h, v, x0):
        if not field.is_zero(diff.std):
            return False
        m = _x_order_at(h, v0, x0, field)
        if m % 2 or diff.is_zero():
            return True
        fm = h.partial(((0,) * len(v)) + (m,), (*v0, x0))
        return field.sign(diff.leading()[1]) == field.sign(fm)
    try:
        qs_solve_slice(h, v, x0, w)
        return True
    except (NotInSliceImage, SolverDiverged, StepCapExceeded, NoRealRoot, NoFiniteM):
        return False
