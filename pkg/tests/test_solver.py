"""Slice classification, the leading-term solver, families, monotonicity,
IVP criteria, domain splitting and extrema."""

import random
from fractions import Fraction as F

import pytest

from fermatreals import (
    BIGFLOAT,
    EXACT,
    ExpNegInvOracle,
    FermatReal,
    Monotonicity,
    MultiPolynomialOracle,
    NoRealPreimage,
    NotInSliceImage,
    PolynomialOracle,
    RootNotExact,
    SolverDiverged,
    classify_monotone_global,
    classify_slice,
    extrema_on_interval,
    fermat_extend,
    fermat_extend_multi,
    ivp_criterion_at,
    ivp_solve,
    normalize,
    power_oracle,
    qs_slice_image_contains,
    qs_solve_slice,
    real,
    refine_to_fundamental,
    slice_image_contains,
    solution_family,
    solve_slice,
    split_domain,
    t,
    t_power,
)
from conftest import dpoly, epoly, random_fermat, random_infinitesimal, to_float_value

CUBE = power_oracle(3)
SQUARE = power_oracle(2)
H_SPLIT = MultiPolynomialOracle(2, {(0, 3): 1, (1, 2): 1}, identifier="y^3+x*y^2")


class TestClassify:
    def test_cube_odd(self):
        cls = classify_slice(CUBE, F(0))
        assert cls.is_odd and cls.order == 3 and cls.sign == 1

    def test_square_even(self):
        cls = classify_slice(SQUARE, F(0))
        assert cls.is_even and cls.order == 2 and cls.sign == 1

    def test_declared_flat(self):
        assert classify_slice(ExpNegInvOracle(), F(0)).is_flat

    def test_first_order(self):
        cls = classify_slice(PolynomialOracle([0, 1, 1]), F(0))
        assert cls.order == 1 and cls.sign == 1

    def test_matches_symbolic_search(self):
        rng = random.Random(41)
        for _ in range(80):
            coeffs = [F(rng.randint(-3, 3)) for _ in range(rng.randint(2, 7))]
            if all(c == 0 for c in coeffs[1:]):
                coeffs.append(F(1))
            a = F(rng.randint(-2, 2))
            cls = classify_slice(PolynomialOracle(coeffs), a)
            expected = None
            for n in range(1, len(coeffs) + 1):
                val = epoly(dpoly(coeffs, n), a)
                if val != 0:
                    expected = (n, 1 if val > 0 else -1)
                    break
            assert (cls.order, cls.sign) == expected


class TestMembership:
    def test_even_rejects_wrong_sign(self):
        assert not slice_image_contains(SQUARE, F(0), -t())
        assert slice_image_contains(SQUARE, F(0), t())

    def test_odd_covers_whole_slice(self):
        w = t_power(F(1, 2), -5) + t()
        assert slice_image_contains(CUBE, F(0), w)

    def test_flat_only_its_value(self):
        flat = ExpNegInvOracle()
        assert slice_image_contains(flat, F(0), real(0))
        assert not slice_image_contains(flat, F(0), t())
        assert not slice_image_contains(flat, F(0), -t())

    def test_real_part_must_match(self):
        assert not slice_image_contains(CUBE, F(0), real(1) + t())


class TestSolveSlice:
    def test_cube_root_of_t(self):
        assert solve_slice(CUBE, F(0), t()) == t_power(F(1, 3))

    def test_two_term_target(self):
        w = t_power(F(1, 2)) + t()
        sol = solve_slice(CUBE, F(0), w)
        assert sol == normalize([(F(1, 6), 1), (F(2, 3), F(1, 3))])
        assert fermat_extend(CUBE, sol) == w

    def test_first_order_kills_square(self):
        f = PolynomialOracle([0, 1, 1])
        assert solve_slice(f, F(0), t()) == t()

    def test_even_branches(self):
        pos = solve_slice(SQUARE, F(0), t())
        neg = solve_slice(SQUARE, F(0), t(), negative_branch=True)
        assert pos == t_power(F(1, 2))
        assert neg == t_power(F(1, 2), -1)
        assert fermat_extend(SQUARE, neg) == t()

    def test_not_in_image_raises(self):
        with pytest.raises(NotInSliceImage):
            solve_slice(SQUARE, F(0), -t())
        with pytest.raises(NotInSliceImage):
            solve_slice(CUBE, F(0), real(1) + t())

    def test_irrational_root_exact_backend(self):
        with pytest.raises(RootNotExact):
            solve_slice(SQUARE, F(0), t().scale(2))

    def test_irrational_root_float_backend(self):
        w = to_float_value(t().scale(2))
        sol = solve_slice(SQUARE, BIGFLOAT.convert(0), w)
        back = fermat_extend(SQUARE, sol)
        assert abs(back.coefficient(F(1)) - 2) < BIGFLOAT.eps

    def test_random_round_trips(self):
        rng = random.Random(43)
        for _ in range(100):
            f = PolynomialOracle(
                [F(rng.randint(-4, 4)) for _ in range(rng.randint(2, 6))]
            )
            a = F(rng.randint(-2, 2))
            cls = classify_slice(f, a)
            s = random_infinitesimal(rng, max_terms=2, coef_bound=4)
            if cls.order and s.terms and cls.order * s.terms[0][0] > 1:
                continue
            w = fermat_extend(f, real(a) + s)
            try:
                sol = solve_slice(f, a, w)
            except RootNotExact:
                continue
            assert fermat_extend(f, sol) == w


class TestFundamentalFamilies:
    def test_refine_drops_free_tail(self):
        y = t_power(F(1, 3)) + t_power(F(1, 2))
        assert refine_to_fundamental(CUBE, y) == t_power(F(1, 3))

    def test_refine_identity_for_first_order(self):
        f = PolynomialOracle([0, 1])
        y = t_power(F(1, 3)) + t_power(F(1, 2)) + t()
        assert refine_to_fundamental(f, y) == y

    def test_refine_preserves_value(self):
        y = t_power(F(1, 3)) + t_power(F(2, 5), F(7, 3))
        assert fermat_extend(CUBE, y) == fermat_extend(
            CUBE, refine_to_fundamental(CUBE, y)
        )

    def test_family_cube(self):
        fam = solution_family(CUBE, F(0), t())
        assert fam.fundamental == t_power(F(1, 3))
        assert fam.threshold == F(1, 3)

    def test_family_identity(self):
        fam = solution_family(PolynomialOracle([0, 1]), F(0), t_power(F(1, 2)))
        assert fam.fundamental == t_power(F(1, 2))
        assert fam.threshold == 1

    def test_family_square(self):
        fam = solution_family(SQUARE, F(0), t())
        assert fam.fundamental == t_power(F(1, 2))
        assert fam.threshold == F(1, 2)

    def test_family_soundness_random_tails(self):
        rng = random.Random(47)
        cases = [
            (CUBE, F(0), t()),
            (SQUARE, F(0), t()),
            (PolynomialOracle([0, 1]), F(0), t_power(F(1, 2))),
            (CUBE, F(0), t_power(F(1, 2)) + t()),
        ]
        for f, a, w in cases:
            fam = solution_family(f, a, w)
            pool = [e for e in
                    (F(p, q) for q in range(1, 13) for p in range(1, q + 1))
                    if e > fam.threshold]
            for _ in range(100):
                z = random_infinitesimal(rng, max_terms=2, coef_bound=5,
                                         exponents=sorted(set(pool)))
                assert fermat_extend(f, fam.fundamental + z) == w
                assert refine_to_fundamental(f, fam.fundamental + z) == fam.fundamental


class TestMonotonicity:
    def test_cube_increasing(self):
        got = classify_monotone_global(CUBE, [F(-1), F(0), F(1)])
        assert got is Monotonicity.INCREASING

    def test_even_point_unknown(self):
        got = classify_monotone_global(SQUARE, [F(-1), F(0), F(1)])
        assert got is Monotonicity.UNKNOWN

    def test_positive_derivative_strict(self):
        f = PolynomialOracle([0, 1, 0, F(1, 3)])  # f' = 1 + u^2
        got = classify_monotone_global(f, [F(-2), F(0), F(2)])
        assert got is Monotonicity.STRICTLY_INCREASING

    def test_decreasing_mirror(self):
        f = PolynomialOracle([0, 0, 0, -1])
        got = classify_monotone_global(f, [F(-1), F(0), F(1)])
        assert got is Monotonicity.DECREASING


class TestIvpCriterion:
    def test_split_example_good_point(self):
        assert ivp_criterion_at(H_SPLIT, (t_power(F(1, 100)),), F(1))

    def test_split_example_bad_point(self):
        assert not ivp_criterion_at(H_SPLIT, (t_power(F(1, 100)),), F(0))

    def test_real_parameter_vacuous(self):
        assert ivp_criterion_at(H_SPLIT, (real(2),), F(0))

    def test_no_parameter_dependence(self):
        h = MultiPolynomialOracle(2, {(0, 2): 1})
        assert ivp_criterion_at(h, (t(),), F(0))


class TestSplitDomain:
    def test_split_example(self):
        res = split_domain(H_SPLIT, (t_power(F(1, 100)),), (None, None))
        assert res.split_points == (F(0),)
        assert res.intervals == ((None, F(0)), (F(0), None))

    def test_no_split_linear_leading(self):
        h = MultiPolynomialOracle(2, {(0, 1): 1, (1, 2): 1}, identifier="y+x*y^2")
        res = split_domain(h, (t(),), (None, None))
        assert res.split_points == ()
        assert res.intervals == ((None, None),)

    def test_even_candidate_passes(self):
        h = MultiPolynomialOracle(2, {(0, 2): 1}, identifier="y^2")
        res = split_domain(h, (t(),), (None, None))
        assert res.split_points == ()

    def test_restricted_interval(self):
        res = split_domain(H_SPLIT, (t_power(F(1, 100)),), (F(1), F(2)))
        assert res.split_points == ()
        assert res.intervals == ((F(1), F(2)),)


class TestIvpSolve:
    def test_cubic_minus_u(self):
        f = PolynomialOracle([0, -1, 0, 1])
        c = ivp_solve(f, real(-2), real(2), t())
        assert fermat_extend(f, c) == t()
        assert real(-2) < c < real(2)
        assert refine_to_fundamental(f, c) == real(-1) + t().scale(F(1, 2))

    def test_cube_reuses_fundamental(self):
        assert ivp_solve(CUBE, real(-1), real(1), t()) == t_power(F(1, 3))

    def test_endpoint_value(self):
        f = PolynomialOracle([0, -1, 0, 1])
        a = real(-2)
        assert ivp_solve(f, a, real(2), fermat_extend(f, a)) == a

    def test_out_of_range(self):
        with pytest.raises(NoRealPreimage):
            ivp_solve(PolynomialOracle([0, 1]), real(0), real(1), real(5))

    def test_random_strict_interior(self):
        rng = random.Random(53)
        for _ in range(40):
            q = [F(rng.randint(-2, 2)) for _ in range(3)]
            # f' = 1 + q(u)^2 > 0, so f is strictly increasing
            sq = [F(0)] * (2 * len(q) - 1)
            for i, aa in enumerate(q):
                for k, bb in enumerate(q):
                    sq[i + k] += aa * bb
            deriv = [F(1)] + [F(0)] * (len(sq) - 1)
            deriv = [a + b for a, b in zip(deriv + [F(0)] * len(sq), sq + [F(0)])]
            coeffs = [F(0)] + [c / (k + 1) for k, c in enumerate(deriv)]
            f = PolynomialOracle(coeffs)
            lo, hi = real(-2), real(2)
            mid = F(rng.randint(-1, 1))
            target = fermat_extend(f, real(mid) + random_infinitesimal(rng, 2, 3))
            c = ivp_solve(f, lo, hi, target)
            assert fermat_extend(f, c) == target
            assert lo < c < hi


class TestExtrema:
    def test_square_shifted_endpoint(self):
        res = extrema_on_interval(SQUARE, real(-1) + t(), real(1))
        assert res.minimum == real(0)
        assert res.maximum == real(1)
        assert res.argmin == F(0)
        assert res.argmax == real(1)

    def test_identity(self):
        res = extrema_on_interval(PolynomialOracle([0, 1]), t(), real(1) + t())
        assert res.minimum == t()
        assert res.maximum == real(1) + t()

    def test_cubic_endpoints_dominate(self):
        f = PolynomialOracle([0, -1, 0, 1])
        res = extrema_on_interval(f, real(-2), real(2))
        assert res.minimum == real(-6)
        assert res.maximum == real(6)
        assert res.argmin == real(-2)
        assert res.argmax == real(2)

    def test_rational_value_at_irrational_point(self):
        # u^4 - u^2 has minimum value -1/4 at u = ±1/sqrt(2)
        f = PolynomialOracle([0, 0, -1, 0, 1])
        res = extrema_on_interval(f, real(-1), real(1))
        assert res.minimum == real(F(-1, 4))
        assert res.maximum == real(0)

    def test_irrational_value_raises_exact(self):
        # minimum of u^3 - u on [0, 2] sits at 1/sqrt(3)
        f = PolynomialOracle([0, -1, 0, 1])
        with pytest.raises(RootNotExact):
            extrema_on_interval(f, real(0), real(2))

    def test_irrational_value_float_backend(self):
        f = PolynomialOracle([0, -1, 0, 1])
        res = extrema_on_interval(
            f, FermatReal.real(0, BIGFLOAT), FermatReal.real(2, BIGFLOAT)
        )
        expected = -2 / (3 * BIGFLOAT.convert(3) ** F(1, 2))
        assert abs(res.minimum.std - expected) < BIGFLOAT.convert(10) ** -40


class TestBoundaryObservation:
    def test_values_below_the_real_minimum_unreachable(self):
        rng = random.Random(59)
        # u^2 with minimum 0 at 0; (u^2 - 1)^2 with minimum 0 at +-1
        cases = [
            (SQUARE, [F(0)]),
            (PolynomialOracle([1, 0, -2, 0, 1]), [F(-1), F(1)]),
        ]
        for f, minima in cases:
            for a in minima:
                b = f.derivative(0, a)
                for _ in range(200):
                    drop = random_infinitesimal(rng, max_terms=2, coef_bound=5)
                    w = real(b) + drop
                    if w < real(b):
                        assert not slice_image_contains(f, a, w)
            # strictly smaller real parts fail at every sampled slice point
            for a in [F(-2), F(-1), F(0), F(1), F(2)]:
                for val in (F(-1), F(-1, 100)):
                    assert not slice_image_contains(f, a, real(val) + t())


class TestEvenCaseTwoSidedRefinement:
    def test_both_half_slices_reach_the_same_targets(self):
        rng = random.Random(67)
        cases = [(SQUARE, F(0)), (PolynomialOracle([0, 0, -1, 0, 1]), F(0))]
        for f, a in cases:
            sign = classify_slice(f, a).sign
            fa = f.derivative(0, a)
            for _ in range(50):
                drop = random_infinitesimal(rng, max_terms=2, coef_bound=4)
                if drop.is_zero():
                    continue
                if (drop.leading()[1] > 0) != (sign > 0):
                    drop = -drop
                w = real(fa) + drop
                assert slice_image_contains(f, a, w)
                try:
                    upper = solve_slice(f, a, w)
                    lower = solve_slice(f, a, w, negative_branch=True)
                except RootNotExact:
                    continue
                assert fermat_extend(f, upper) == w
                assert fermat_extend(f, lower) == w
                assert upper.is_zero() or upper.leading()[1] > 0
                assert lower.is_zero() or lower.leading()[1] < 0


class TestParametrizedSlices:
    def test_values_at_real_points(self):
        v = (t_power(F(1, 100)),)
        assert fermat_extend_multi(H_SPLIT, (*v, real(0))).is_zero()
        got = fermat_extend_multi(H_SPLIT, (*v, real(-1)))
        assert got == normalize([(F(1, 100), 1)], std=-1)

    def test_unsolvable_target_diverges(self):
        v = (t_power(F(1, 100)),)
        w = t_power(F(51, 100), -1)
        with pytest.raises(SolverDiverged):
            qs_solve_slice(H_SPLIT, v, F(0), w)
        assert not qs_slice_image_contains(H_SPLIT, v, F(0), w)

    def test_solvable_on_good_slice(self):
        v = (t_power(F(1, 100)),)
        base = fermat_extend_multi(H_SPLIT, (*v, real(1)))
        w = base + t().scale(2)
        sol = qs_solve_slice(H_SPLIT, v, F(1), w)
        assert fermat_extend_multi(H_SPLIT, (*v, sol)) == w
        assert qs_slice_image_contains(H_SPLIT, v, F(1), w)

    def test_membership_via_theorem_when_criterion_holds(self):
        v = (real(2),)
        base = fermat_extend_multi(H_SPLIT, (*v, real(1)))
        assert qs_slice_image_contains(H_SPLIT, v, F(1), base + t())
