import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from e0struct.curve import (
    INFINITY,
    CurvePoint,
    Reduction,
    change_coordinates,
    compute_invariants,
    filtration_level,
    mul_point,
    negate,
    normalize_additive,
    parse_point,
    point_add,
    psi,
    psi_inverse,
    random_normalized_curve,
    random_point,
    reduce_point,
    reduction_type,
    singular_point,
    transform_point,
)
from e0struct.errors import (
    NotAdditiveError,
    NotInE0Error,
    NotIntegralError,
    NotNormalizedError,
    NotOnCurveError,
    PrecisionError,
    SingularCurveError,
)
from e0struct.padic import from_rational

x, y, xp, yp = sympy.symbols("x y xp yp")
small = st.integers(-30, 30)


def _equation(a):
    a1, a2, a3, a4, a6 = (sympy.Rational(v.numerator, v.denominator) for v in a)
    return y**2 + a1 * x * y + a3 * y - (x**3 + a2 * x**2 + a4 * x + a6)


@settings(max_examples=60, deadline=None)
@given(st.tuples(small, small, small, small, small))
def test_discriminant_against_sympy(a):
    # disc(4x^3 + b2 x^2 + 2 b4 x + b6) = 16 * Delta
    try:
        E = compute_invariants(a, 3)
    except SingularCurveError:
        return
    cubic = 4 * x**3 + int(E.b2) * x**2 + 2 * int(E.b4) * x + int(E.b6)
    assert sympy.discriminant(cubic, x) == 16 * int(E.delta)
    assert E.c4**3 - E.c6**2 == 1728 * E.delta


def test_invariants_of_e2():
    E = compute_invariants((0, 0, -2, 0, -2), 2)
    assert (E.b2, E.b4, E.b6) == (0, 0, -4)
    assert E.delta == -432 and E.c4 == 0


@settings(max_examples=40, deadline=None)
@given(st.tuples(small, small, small, small, small), small, small, small)
def test_coordinate_change_against_substitution(a, r, s, t):
    try:
        E = compute_invariants(a, 5)
    except SingularCurveError:
        return
    G = change_coordinates(E, r, s, t)
    substituted = _equation(E.a).subs({x: xp + r, y: yp + s * xp + t}, simultaneous=True)
    target = _equation(G.a).subs({x: xp, y: yp}, simultaneous=True)
    assert sympy.expand(substituted - target) == 0
    assert G.delta == E.delta and G.c4 == E.c4


def test_construction_errors():
    with pytest.raises(SingularCurveError):
        compute_invariants((0, 0, 0, 0, 0), 5)
    with pytest.raises(NotIntegralError):
        compute_invariants((0, 0, 0, Fraction(1, 5), 1), 5)
    with pytest.raises(ValueError):
        compute_invariants((0, 0, 0, 1, 1), 9)
    # denominators prime to p are fine
    assert compute_invariants((0, 0, 0, Fraction(1, 3), 1), 5).a4 == Fraction(1, 3)


def test_reduction_types():
    assert reduction_type(compute_invariants((0, 0, 1, -1, 0), 5)).kind is Reduction.GOOD
    mult = reduction_type(compute_invariants((0, 0, 1, -1, 0), 37))
    assert mult.kind is Reduction.MULTIPLICATIVE and mult.singular_point is not None
    assert reduction_type(compute_invariants((0, 20, -5, -15, 0), 5)) .singular_point == (0, 0)


def test_normalize_moves_the_cusp(rng):
    E5 = compute_invariants((0, 20, -5, -15, 0), 5)
    moved = change_coordinates(E5, 2, 3, -1)
    assert singular_point(moved) == ((0 - 2) % 5, (0 - 3 * (0 - 2) + 1) % 5)
    norm = normalize_additive(moved)
    assert norm.curve.is_normalized
    assert normalize_additive(E5).is_identity
    with pytest.raises(NotAdditiveError):
        normalize_additive(compute_invariants((0, 0, 1, -1, 0), 37))


def test_normalize_at_two_and_three(rng):
    for p in (2, 3):
        for _ in range(30):
            E = random_normalized_curve(p, rng)
            G = change_coordinates(E, *(rng.randint(-9, 9) for _ in range(3)))
            N = normalize_additive(G)
            assert N.curve.is_normalized and N.curve.delta == G.delta


def test_transform_point_follows_the_curve():
    E = compute_invariants((0, 20, -5, -15, 0), 5)
    G = change_coordinates(E, 1, 2, 3)
    P = CurvePoint(Fraction(1), Fraction(-1))
    # a point of E pulled back to G's coordinates
    assert G.contains(transform_point(P, (1, 2, 3)))


# the curve y^2 + y = x^3 - x and multiples of (0, 0)
CURVE_37 = (0, 0, 1, -1, 0)
MULTIPLES = {
    1: (0, 0), 2: (1, 0), 3: (-1, -1), 4: (2, -3),
    5: (Fraction(1, 4), Fraction(-5, 8)), 6: (6, 14),
}


def test_known_multiples():
    E = compute_invariants(CURVE_37, 5)
    P = CurvePoint(Fraction(0), Fraction(0))
    for n, (a, b) in MULTIPLES.items():
        assert mul_point(E, n, P) == CurvePoint(Fraction(a), Fraction(b))
    assert mul_point(E, -2, P) == negate(E, CurvePoint(Fraction(1), Fraction(0)))
    assert mul_point(E, 0, P) is INFINITY


def test_group_law_on_rationals():
    E = compute_invariants(CURVE_37, 5)
    pts = [CurvePoint(Fraction(a), Fraction(b)) for a, b in MULTIPLES.values()]
    for P in pts[:3]:
        assert point_add(E, P, negate(E, P)).is_infinity
        assert point_add(E, P, INFINITY) == P
        for Q in pts[:3]:
            assert point_add(E, P, Q) == point_add(E, Q, P)
            for R in pts[:2]:
                assert point_add(E, point_add(E, P, Q), R) == point_add(E, P, point_add(E, Q, R))


def test_worked_points_are_torsion(example):
    E, (px, py) = example
    P = CurvePoint(Fraction(px), Fraction(py))
    assert E.contains(P)
    assert mul_point(E, E.prime, P).is_infinity
    assert all(not mul_point(E, k, P).is_infinity for k in range(1, E.prime))
    red = reduce_point(E, P)
    assert red.in_E0 and not red.in_E1 and red.image == (px % E.prime, py % E.prime)


def test_point_errors():
    E = compute_invariants(CURVE_37, 5)
    with pytest.raises(NotOnCurveError):
        point_add(E, CurvePoint(Fraction(1), Fraction(1)), INFINITY)
    # (0, 3) on y^2 = x^3 + 9x + 9 reduces to the cusp mod 3
    with pytest.raises(NotInE0Error):
        filtration_level(compute_invariants((0, 0, 0, 9, 9), 3), CurvePoint(Fraction(0), Fraction(3)))
    with pytest.raises(NotNormalizedError):
        psi(E, CurvePoint(Fraction(0), Fraction(0)))


def test_parse_point():
    assert parse_point("O") is INFINITY
    assert parse_point("1/4,-5/8") == CurvePoint(Fraction(1, 4), Fraction(-5, 8))
    with pytest.raises(ValueError):
        parse_point("1,2,3")


def test_padic_points_need_a_tolerance_to_cancel(rng):
    E = random_normalized_curve(5, rng)
    P = random_point(E, rng, 0, 12)
    with pytest.raises(PrecisionError):
        point_add(E, P, negate(E, P))
    assert point_add(E, P, negate(E, P), digits=10).is_infinity


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_random_points_land_where_asked(p):
    rng = random.Random(p)
    E = random_normalized_curve(p, rng)
    for level in range(4):
        P = random_point(E, rng, level, 15)
        assert E.contains(P)
        assert filtration_level(E, P) == level
        assert psi(E, P).valuation == level


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_psi_inverse_round_trip(p):
    rng = random.Random(10 + p)
    E = random_normalized_curve(p, rng)
    for level in (0, 1, 2):
        P = random_point(E, rng, level, 20)
        z = psi(E, P)
        Q = psi_inverse(E, z, 8)
        assert Q.x.is_equal(P.x, Q.x.absolute_precision)
        assert Q.y.is_equal(P.y, Q.y.absolute_precision)
    assert psi_inverse(E, from_rational(0, 1, p)).is_infinity


def test_psi_of_e2_point():
    E = compute_invariants((0, 0, -2, 0, -2), 2)
    assert psi(E, CurvePoint(Fraction(1), Fraction(1)), 6).is_equal(-1, 6)
    assert psi(E, INFINITY).is_exact_zero


def test_filtration_of_rational_points():
    E = compute_invariants((0, 0, -2, 0, -2), 2)
    assert filtration_level(E, INFINITY) == float("inf")
    assert filtration_level(E, CurvePoint(Fraction(1), Fraction(1))) == 0
