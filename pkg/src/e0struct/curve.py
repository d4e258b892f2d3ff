"""
Weierstrass curves over Z_p: invariants, reduction, normalization and points.

Curve coefficients are exact rationals.  Point coordinates are either exact
rationals (every equality decision is exact) or :class:`PadicNumber` values,
where an undecidable equality raises :class:`PrecisionError` unless the caller
passes ``digits`` to accept agreement modulo ``p**digits``.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    NotAdditiveError,
    NotInE0Error,
    NotIntegralError,
    NotNormalizedError,
    NotOnCurveError,
    PrecisionError,
    SingularCurveError,
)
from .formal import CoefficientRing, compute_w, required_degree
from .padic import DEFAULT_PRECISION, INF, PadicNumber, is_prime, residue, valuation_rational

WEIGHTS = (1, 2, 3, 4, 6)


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Z_p, with its standard invariants."""

    prime: int
    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction
    a6: Fraction
    b2: Fraction = field(init=False)
    b4: Fraction = field(init=False)
    b6: Fraction = field(init=False)
    b8: Fraction = field(init=False)
    c4: Fraction = field(init=False)
    c6: Fraction = field(init=False)
    delta: Fraction = field(init=False)

    def __post_init__(self):
        p = self.prime
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        for name in ("a1", "a2", "a3", "a4", "a6"):
            value = Fraction(getattr(self, name))
            object.__setattr__(self, name, value)
            if valuation_rational(value, p) < 0:
                raise NotIntegralError(f"{name} = {value} is not {p}-integral")
        a1, a2, a3, a4, a6 = self.a
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        c4 = b2 * b2 - 24 * b4
        c6 = -b2**3 + 36 * b2 * b4 - 216 * b6
        delta = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        if delta == 0:
            raise SingularCurveError(f"discriminant vanishes for {self.a}")
        for name, value in zip(("b2", "b4", "b6", "b8", "c4", "c6", "delta"), (b2, b4, b6, b8, c4, c6, delta)):
            object.__setattr__(self, name, value)

    @property
    def a(self) -> tuple[Fraction, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def valuation(self, q) -> int | float:
        return valuation_rational(q, self.prime)

    @property
    def is_normalized(self) -> bool:
        """All coefficients lie in pZ_p."""
        return all(self.valuation(a) >= 1 for a in self.a)

    @property
    def minimality_certified(self) -> bool:
        """v_p(delta) < 12, a sufficient condition for a minimal model."""
        return self.valuation(self.delta) < 12

    def padic_coefficients(self, precision: int = DEFAULT_PRECISION) -> tuple[PadicNumber, ...]:
        return tuple(PadicNumber.from_rational(a, 1, self.prime, precision) for a in self.a)

    def coefficient_ring(self, precision: int) -> CoefficientRing:
        return CoefficientRing.specialized(self.a, self.prime, precision)

    def residual(self, x, y):
        """Left side minus right side of the equation at (x, y)."""
        a1, a2, a3, a4, a6 = self.a
        return y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x + a4 * x + a6)

    def contains(self, P: CurvePoint) -> bool:
        if P.is_infinity:
            return True
        r = self.residual(P.x, P.y)
        if isinstance(r, PadicNumber):
            return r.is_exact_zero or r.precision == 0
        return r == 0

    def to_dict(self) -> dict:
        return {
            "p": self.prime,
            "a": [_fraction_json(a) for a in self.a],
            "b2": _fraction_json(self.b2),
            "b4": _fraction_json(self.b4),
            "b6": _fraction_json(self.b6),
            "b8": _fraction_json(self.b8),
            "c4": _fraction_json(self.c4),
            "c6": _fraction_json(self.c6),
            "delta": _fraction_json(self.delta),
            "v_delta": self.valuation(self.delta),
            "v_c4": _inf_json(self.valuation(self.c4)),
        }

    def __str__(self):
        a1, a2, a3, a4, a6 = self.a
        return f"[{a1}, {a2}, {a3}, {a4}, {a6}] over Z_{self.prime}"


def _fraction_json(q: Fraction):
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _inf_json(v):
    return "inf" if v == INF else v


def compute_invariants(a: Sequence, p: int) -> WeierstrassCurve:
    if len(a) != 5:
        raise ValueError("need five coefficients a1, a2, a3, a4, a6")
    return WeierstrassCurve(p, *[Fraction(x) for x in a])


# ---------------------------------------------------------------------------
# reduction


class Reduction(enum.Enum):
    GOOD = "good"
    MULTIPLICATIVE = "multiplicative"
    ADDITIVE = "additive"


@dataclass(frozen=True)
class ReductionType:
    kind: Reduction
    singular_point: tuple[int, int] | None = None


def _reduced_equation(curve: WeierstrassCurve):
    p = curve.prime
    return tuple(residue(a, p) for a in curve.a)


def singular_point(curve: WeierstrassCurve) -> tuple[int, int] | None:
    """The singular point of the curve mod p, or None when it is smooth."""
    p = curve.prime
    a1, a2, a3, a4, a6 = _reduced_equation(curve)

    def is_singular(x, y):
        f = y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6
        fx = a1 * y - 3 * x * x - 2 * a2 * x - a4
        fy = 2 * y + a1 * x + a3
        return f % p == 0 and fx % p == 0 and fy % p == 0

    if p == 2:
        for x in range(2):
            for y in range(2):
                if is_singular(x, y):
                    return (x, y)
        return None
    half = pow(2, -1, p)
    for x in range(p):
        y = (-(a1 * x + a3) * half) % p
        if is_singular(x, y):
            return (x, y)
    return None


def reduction_type(curve: WeierstrassCurve) -> ReductionType:
    if curve.valuation(curve.delta) == 0:
        return ReductionType(Reduction.GOOD)
    point = singular_point(curve)
    if point is None:
        raise AssertionError("p | delta but no singular point found mod p")
    if curve.valuation(curve.c4) == 0:
        return ReductionType(Reduction.MULTIPLICATIVE, point)
    return ReductionType(Reduction.ADDITIVE, point)


@dataclass(frozen=True)
class Normalization:
    curve: WeierstrassCurve
    transform: tuple[int, int, int]

    @property
    def is_identity(self) -> bool:
        return self.transform == (0, 0, 0)


def change_coordinates(curve: WeierstrassCurve, r, s, t) -> WeierstrassCurve:
    """The curve in coordinates x = x' + r, y = y' + s x' + t."""
    a1, a2, a3, a4, a6 = curve.a
    return WeierstrassCurve(
        curve.prime,
        a1 + 2 * s,
        a2 - s * a1 + 3 * r - s * s,
        a3 + r * a1 + 2 * t,
        a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
        a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1,
    )


def transform_point(P: CurvePoint, transform: tuple[int, int, int]) -> CurvePoint:
    """Image of P under x' = x - r, y' = y - s x' - t."""
    if P.is_infinity:
        return P
    r, s, t = transform
    x = P.x - r
    return CurvePoint(x, P.y - s * x - t)


def normalize_additive(curve: WeierstrassCurve) -> Normalization:
    """Move the cusp to the origin and make its tangent y = 0, so every a_i lies in pZ_p."""
    red = reduction_type(curve)
    if red.kind is not Reduction.ADDITIVE:
        raise NotAdditiveError(f"{curve} has {red.kind.value} reduction")
    p = curve.prime
    r, t = red.singular_point
    moved = change_coordinates(curve, r, 0, t)
    b1, b2 = residue(moved.a1, p), residue(moved.a2, p)
    # quadratic part y^2 + a1 xy - a2 x^2 must be (y - s x)^2 mod p
    candidates = [s for s in range(p) if (2 * s + b1) % p == 0 and (s * s + b2) % p == 0]
    if not candidates:
        raise AssertionError("additive reduction but the tangent cone is not a double line")
    s = candidates[0]
    result = change_coordinates(curve, r, s, t)
    if not result.is_normalized:
        raise AssertionError(f"normalization of {curve} failed: {result}")
    return Normalization(result, (r, s, t))


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class CurvePoint:
    """An affine point (x, y), or the point at infinity when both are None."""

    x: object = None
    y: object = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __str__(self):
        if self.is_infinity:
            return "O"
        return f"({self.x}, {self.y})"

    def to_dict(self) -> dict | str:
        if self.is_infinity:
            return "O"

        def enc(v):
            if isinstance(v, PadicNumber):
                return v.to_dict()
            return _fraction_json(Fraction(v))

        return {"x": enc(self.x), "y": enc(self.y)}


INFINITY = CurvePoint()


def parse_point(text: str) -> CurvePoint:
    """Parse ``"x,y"`` (integers or fractions) or ``"O"``."""
    from .padic import parse_rational

    text = text.strip()
    if text.upper() == "O":
        return INFINITY
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected 'x,y' or 'O', got {text!r}")
    return CurvePoint(parse_rational(parts[0]), parse_rational(parts[1]))


def _decide_zero(v, digits: int | None) -> bool:
    if isinstance(v, PadicNumber):
        if digits is None:
            if v.is_exact_zero:
                return True
            if v.precision == 0:
                raise PrecisionError(
                    f"cannot decide whether a quantity known to be O({v.prime}^{v.valuation}) vanishes; "
                    "pass digits= to accept agreement to finite precision"
                )
            return False
        return v.is_zero(digits)
    return v == 0


def negate(curve: WeierstrassCurve, P: CurvePoint) -> CurvePoint:
    if P.is_infinity:
        return P
    return CurvePoint(P.x, -P.y - curve.a1 * P.x - curve.a3)


def _add(curve: WeierstrassCurve, P: CurvePoint, Q: CurvePoint, digits: int | None) -> CurvePoint:
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    a1, a2, a3, a4, a6 = curve.a
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    # identical representations are equal outright; x1 - x1 would only be an inexact zero
    if P == Q or _decide_zero(x1 - x2, digits):
        if _decide_zero(y1 + y2 + a1 * x2 + a3, digits):
            return INFINITY
        den = 2 * y1 + a1 * x1 + a3
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / den
        nu = (-x1 * x1 * x1 + a4 * x1 + 2 * a6 - a3 * y1) / den
    else:
        dx = x2 - x1
        lam = (y2 - y1) / dx
        nu = (y1 * x2 - y2 * x1) / dx
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return CurvePoint(x3, y3)


def _check_on_curve(curve, *points):
    for P in points:
        if not curve.contains(P):
            raise NotOnCurveError(f"{P} is not on {curve}")


def point_add(curve: WeierstrassCurve, P: CurvePoint, Q: CurvePoint, digits: int | None = None) -> CurvePoint:
    """Chord-and-tangent sum; ``digits`` sets the p-adic agreement treated as equality."""
    _check_on_curve(curve, P, Q)
    return _add(curve, P, Q, digits)


def mul_point(curve: WeierstrassCurve, n: int, P: CurvePoint, digits: int | None = None) -> CurvePoint:
    _check_on_curve(curve, P)
    if n < 0:
        n, P = -n, negate(curve, P)
    result = INFINITY
    base = P
    while n:
        if n & 1:
            result = _add(curve, result, base, digits)
        n >>= 1
        if n:
            base = _add(curve, base, base, digits)
    return result


# ---------------------------------------------------------------------------
# reduction of points, filtration and the map to the formal group


def _valuation(curve: WeierstrassCurve, v):
    if isinstance(v, PadicNumber):
        return v.valuation
    return curve.valuation(v)


def _residue_mod_p(curve: WeierstrassCurve, v) -> int:
    if isinstance(v, PadicNumber):
        return v.residue(1)
    return residue(v, curve.prime)


@dataclass(frozen=True)
class ReducedPoint:
    image: tuple[int, int] | None  # None is the point at infinity of the special fibre
    in_E0: bool
    in_E1: bool


def reduce_point(curve: WeierstrassCurve, P: CurvePoint) -> ReducedPoint:
    _check_on_curve(curve, P)
    if P.is_infinity:
        return ReducedPoint(None, True, True)
    if min(_valuation(curve, P.x), _valuation(curve, P.y)) < 0:
        return ReducedPoint(None, True, True)
    image = (_residue_mod_p(curve, P.x), _residue_mod_p(curve, P.y))
    sing = singular_point(curve)
    return ReducedPoint(image, image != sing, False)


def filtration_level(curve: WeierstrassCurve, P: CurvePoint) -> int | float:
    """Largest n with v(x) <= -2n and v(y) <= -3n; INF for the point at infinity."""
    if P.is_infinity:
        return INF
    red = reduce_point(curve, P)
    if not red.in_E0:
        raise NotInE0Error(f"{P} reduces to the singular point {red.image}")
    if not red.in_E1:
        return 0
    vx, vy = _valuation(curve, P.x), _valuation(curve, P.y)
    return min(-vx // 2, -vy // 3)


def _require_normalized(curve):
    if not curve.is_normalized:
        raise NotNormalizedError(f"{curve} is not normalized (some a_i is a p-adic unit)")


def psi(curve: WeierstrassCurve, P: CurvePoint, precision: int = DEFAULT_PRECISION) -> PadicNumber:
    """The formal-group parameter z = -x/y of a point of E0 (0 for the point at infinity)."""
    _require_normalized(curve)
    if P.is_infinity:
        return PadicNumber.zero(curve.prime)
    red = reduce_point(curve, P)
    if not red.in_E0:
        raise NotInE0Error(f"{P} reduces to the singular point {red.image}")
    if isinstance(P.x, PadicNumber) or isinstance(P.y, PadicNumber):
        return -P.x / P.y
    return PadicNumber.from_rational(-Fraction(P.x) / Fraction(P.y), 1, curve.prime, precision)


def psi_inverse(curve: WeierstrassCurve, z, digits: int = DEFAULT_PRECISION) -> CurvePoint:
    """The point (z/w(z), -1/w(z)) for a p-adic integer z, coordinates to ``digits`` relative digits."""
    _require_normalized(curve)
    p = curve.prime
    if not isinstance(z, PadicNumber):
        z = PadicNumber.from_rational(z, 1, p, digits + 1)
    if z.is_exact_zero:
        return INFINITY
    if z.valuation < 0:
        raise ValueError("z must be a p-adic integer")
    vz = z.valuation
    absprec = digits + 3 * vz
    if z.absolute_precision < absprec:
        absprec = z.absolute_precision
    ring = curve.coefficient_ring(absprec)
    w = compute_w(required_degree(absprec), ring)
    wz = w.evaluate(z, precision=absprec)
    return CurvePoint(z / wz, -1 / wz)


def random_point(
    curve: WeierstrassCurve,
    rng: random.Random | None = None,
    level: int = 0,
    precision: int = 30,
    t: int | None = None,
) -> CurvePoint:
    """A random point of E_level minus E_(level+1) on a normalized curve, by Hensel lifting.

    The point is (p^(-2 level) X, p^(-3 level) Y) where (X, Y) lifts the
    smooth point (t^2, t^3) of y^2 = x^3 on the rescaled equation with
    coefficients a_i p^(i level).
    """
    _require_normalized(curve)
    rng = rng or random.Random()
    p = curve.prime
    M = p**precision
    alpha = [residue(a * Fraction(p) ** (w * level), M) for a, w in zip(curve.a, WEIGHTS)]
    a1, a2, a3, a4, a6 = alpha
    if t is None:
        t = rng.randrange(1, p)
    if t % p == 0:
        raise ValueError("t must be a unit")

    def f(X, Y):
        return (Y * Y + a1 * X * Y + a3 * Y - X**3 - a2 * X * X - a4 * X - a6) % M

    if p != 2:
        X = (t * t + p * rng.randrange(M)) % M
        Y = pow(t, 3, M)
        for _ in range(2 * precision.bit_length() + 2):
            val = f(X, Y)
            if val == 0:
                break
            Y = (Y - val * pow(2 * Y + a1 * X + a3, -1, M)) % M
    else:
        Y = (pow(t, 3) + p * rng.randrange(M)) % M
        X = t * t % M
        for _ in range(2 * precision.bit_length() + 2):
            val = f(X, Y)
            if val == 0:
                break
            # f decreases in X, so Newton on -f
            deriv = 3 * X * X + 2 * a2 * X + a4 - a1 * Y
            X = (X + val * pow(deriv, -1, M)) % M
    if f(X, Y) != 0:
        raise AssertionError("Hensel lifting did not converge")
    return CurvePoint(PadicNumber(p, -2 * level, X, precision), PadicNumber(p, -3 * level, Y, precision))


def normalized_e0_points(curve: WeierstrassCurve) -> list[tuple[int, int]]:
    """Smooth points of the special fibre y^2 = x^3 of a normalized curve (affine part)."""
    p = curve.prime
    return sorted({(t * t % p, t**3 % p) for t in range(1, p)})


def random_normalized_curve(p: int, rng: random.Random, bound: int | None = None) -> WeierstrassCurve:
    """A random curve with every a_i in pZ_p (so additive reduction) and nonzero discriminant."""
    bound = bound or p**3
    while True:
        a = [p * rng.randint(-bound, bound) for _ in range(5)]
        try:
            return WeierstrassCurve(p, *a)
        except SingularCurveError:
            continue
