"""Numeric structures of the three Hausdorff topologies and the
counterexample sequence catalog.

The omega metric sums the order of coordinate differences onto the
standard-part distance, so its small balls only move the standard part.
The order topology is the interval topology of the dictionary order.  The
Euclidean inner product pairs standard parts and matching-exponent
coefficients.  Convergence itself is not decidable from a finite prefix;
what is decidable are the two tail characterizations (difference real /
difference a pure t-multiple), and those are what this module exposes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .core import FermatReal
from .errors import UnknownName
from .extension import fermat_extend
from .oracles import CallableOracle, power_oracle
from .scalars import BIGFLOAT, EXACT


def _as_vector(x) -> tuple:
    return (x,) if isinstance(x, FermatReal) else tuple(x)


def d_omega(x, y):
    """Norm of the standard-part difference plus the coordinatewise sum of
    orders (with order 0 for real differences); a complete metric."""
    xs, ys = _as_vector(x), _as_vector(y)
    if len(xs) != len(ys):
        raise ValueError("dimension mismatch")
    field = xs[0].field
    diffs = [a - b for a, b in zip(xs, ys)]
    if len(diffs) == 1:
        norm = abs(diffs[0].std)
    else:
        norm = field.sqrt(sum((d.std * d.std for d in diffs), field.zero))
    omega_sum = sum((d.order_omega() for d in diffs), Fraction(0))
    return norm + field.convert(omega_sum)


def euclid_inner(x, y):
    """Products of standard parts plus products of matching-exponent
    coefficients, summed over coordinates."""
    xs, ys = _as_vector(x), _as_vector(y)
    if len(xs) != len(ys):
        raise ValueError("dimension mismatch")
    field = xs[0].field
    total = field.zero
    for a, b in zip(xs, ys):
        total = total + a.std * b.std
        bterms = dict(b.terms)
        for e, c in a.terms:
            if e in bterms:
                total = total + c * bterms[e]
    return total


def euclid_norm_sq(x):
    return euclid_inner(x, x)


def euclid_norm(x):
    xs = _as_vector(x)
    return xs[0].field.sqrt(euclid_norm_sq(x))


def in_order_interval(x: FermatReal, lo: FermatReal, hi: FermatReal) -> bool:
    return lo < x < hi


def in_fermat_open(x: FermatReal, open_set) -> bool:
    """Membership in the lift of a real open set: only the standard part
    matters.  The set is an (lo, hi) pair or a list of such pairs, with
    None for an unbounded end."""
    if open_set and isinstance(open_set[0], (tuple, list)):
        return any(in_fermat_open(x, piece) for piece in open_set)
    lo, hi = open_set
    s = x.std
    if lo is not None and not s > x.field.convert(lo):
        return False
    if hi is not None and not s < x.field.convert(hi):
        return False
    return True


# -- sequence prefixes ---------------------------------------------------------


@dataclass(frozen=True)
class SequencePrefix:
    """A finite initial segment of a sequence, with its generator tag."""

    values: tuple
    name: str = ""
    params: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if not self.values:
            raise ValueError("a sequence prefix cannot be empty")

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> FermatReal:
        return self.values[i]


@dataclass(frozen=True)
class ConvergenceVerdict:
    """Outcome of a tail characterization on a prefix: the 1-based index N
    past which the differences have the required shape, with the tail data,
    or not-characterized."""

    characterized: bool
    index: Optional[int] = None
    tail: tuple = ()

    def __bool__(self) -> bool:
        return self.characterized


NOT_CHARACTERIZED = ConvergenceVerdict(False)


def omega_limit_decompose(s: SequencePrefix) -> ConvergenceVerdict:
    """Least N with a_n - a_N real for every later prefix entry (the
    necessary tail shape for omega convergence); tail holds those reals."""
    values = s.values
    last = max(1, len(values) - 1)
    for n_idx in range(1, last + 1):
        base = values[n_idx - 1]
        diffs = [v - base for v in values[n_idx:]]
        if all(d.is_real() for d in diffs):
            return ConvergenceVerdict(True, n_idx, tuple(d.std for d in diffs))
    return NOT_CHARACTERIZED


def order_limit_decompose(s: SequencePrefix) -> ConvergenceVerdict:
    """Least N with a_n - a_N a pure degree-1 term for later entries (the
    tail shape for order convergence); tail holds the t-coefficients."""
    values = s.values
    field = values[0].field

    def pure_t(d: FermatReal):
        if not field.is_zero(d.std):
            return None
        if not d.terms:
            return field.zero
        if len(d.terms) == 1 and d.terms[0][0] == 1:
            return d.terms[0][1]
        return None

    last = max(1, len(values) - 1)
    for n_idx in range(1, last + 1):
        base = values[n_idx - 1]
        coeffs = [pure_t(v - base) for v in values[n_idx:]]
        if all(c is not None for c in coeffs):
            return ConvergenceVerdict(True, n_idx, tuple(coeffs))
    return NOT_CHARACTERIZED


def cauchy_check_prefix(
    s: SequencePrefix, metric: str, schedule: Sequence[tuple]
) -> bool:
    """Finite Cauchy evidence: for each (index, bound) in the schedule, all
    pairwise distances past that index stay below the bound.

    Under the Euclidean metric the comparison runs on squared norms, which
    keeps the exact backend exact.
    """
    if metric not in ("omega", "euclid"):
        raise ValueError("metric must be 'omega' or 'euclid'")
    values = s.values
    field = values[0].field
    for start, bound in schedule:
        bound = Fraction(bound) if not isinstance(bound, Fraction) else bound
        tail = values[start:]
        for i, am in enumerate(tail):
            for an in tail[i + 1 :]:
                if metric == "omega":
                    if not d_omega(am, an) < field.convert(bound):
                        return False
                else:
                    if not euclid_norm_sq(am - an) < field.convert(bound * bound):
                        return False
    return True


# -- counterexample catalog ------------------------------------------------------


def _gen_euclid_cauchy_divergent(m: int) -> SequencePrefix:
    """a_k = sum_{i<=k} (1/i!) t^(1/i): Euclidean-Cauchy, yet no limit."""
    values = []
    acc = FermatReal.real(0, EXACT)
    for i in range(1, m + 1):
        acc = acc + FermatReal.t_power(Fraction(1, i), Fraction(1, math.factorial(i)))
        values.append(acc)
    return SequencePrefix(tuple(values), "euclid_cauchy_divergent", {"m": m})


def _gen_mult_norm_blowup(n: int, delta=1) -> SequencePrefix:
    """x_k = (delta/sqrt(k+1)) sum_{i<=k} t^(1/2^i), unit-ball witnesses for
    the discontinuity of multiplication in the Euclidean topology."""
    values = []
    d = BIGFLOAT.convert(delta)
    for k in range(1, n + 1):
        scale = d / mpmath.sqrt(k + 1)
        terms = [(Fraction(1, 2**i), scale) for i in range(1, k + 1)]
        values.append(FermatReal(BIGFLOAT.zero, terms, BIGFLOAT))
    return SequencePrefix(tuple(values), "mult_norm_blowup", {"n": n, "delta": delta})


def _gen_power_at_one_plus_t(n: int) -> SequencePrefix:
    """Extensions of u^k evaluated at 1 + t: the values 1 + k t march off,
    so no pointwise limit exists past the reals."""
    x = FermatReal.real(1, EXACT) + FermatReal.t_power(1, 1, EXACT)
    values = tuple(fermat_extend(power_oracle(k), x) for k in range(1, n + 1))
    return SequencePrefix(values, "power_at_one_plus_t", {"n": n})


def _gen_sin_over_n_slice(n: int, x: FermatReal | None = None) -> SequencePrefix:
    """Extensions of (1/k) sin(k u) at pi/2 + x for a square-zero x."""
    if x is None:
        x = FermatReal.t_power(1, 1, BIGFLOAT)
    if x.field is not BIGFLOAT:
        raise ValueError("sin_over_n_slice needs the float backend")
    if not (x * x).is_zero():
        raise ValueError("x must square to zero")
    base = FermatReal.real(mpmath.pi / 2, BIGFLOAT) + x
    values = []
    for k in range(1, n + 1):
        oracle = CallableOracle(
            lambda order, a, k=k: mpmath.sin(k * a + order * mpmath.pi / 2)
            * mpmath.mpf(k) ** (order - 1),
            identifier=f"sin({k}u)/{k}",
        )
        values.append(fermat_extend(oracle, base))
    return SequencePrefix(tuple(values), "sin_over_n_slice", {"n": n})


def _gen_lebesgue_partial_integrals(deltas: Sequence[FermatReal]) -> SequencePrefix:
    """b_k = sum_{i<=k} delta_i for supplied infinitesimals delta_i: the
    partial integrals that dominated convergence would force to settle."""
    deltas = tuple(deltas)
    if not deltas:
        raise ValueError("need at least one infinitesimal")
    values = []
    acc = FermatReal.real(0, deltas[0].field)
    for d in deltas:
        acc = acc + d
        values.append(acc)
    return SequencePrefix(
        tuple(values), "lebesgue_partial_integrals", {"n": len(deltas)}
    )


_CATALOG = {
    "euclid_cauchy_divergent": _gen_euclid_cauchy_divergent,
    "mult_norm_blowup": _gen_mult_norm_blowup,
    "power_at_one_plus_t": _gen_power_at_one_plus_t,
    "sin_over_n_slice": _gen_sin_over_n_slice,
    "lebesgue_partial_integrals": _gen_lebesgue_partial_integrals,
}


def make_counterexample(name: str, **params) -> SequencePrefix:
    """Generate a catalog prefix exactly; see the generator docstrings."""
    try:
        gen = _CATALOG[name]
    except KeyError:
        raise UnknownName(
            f"unknown counterexample {name!r}; choose from {sorted(_CATALOG)}"
        ) from None
    return gen(**params)


def catalog_names() -> tuple:
    return tuple(sorted(_CATALOG))
