"""
p-adic numbers at finite relative precision.

A nonzero :class:`PadicNumber` stores ``prime**valuation * unit`` where the
unit is known modulo ``prime**precision``.  Exact zero is its own state
(valuation :data:`INF`).  A value that cancelled down to nothing during
addition is kept as an *inexact* zero: ``unit == 0``, ``precision == 0`` and
``valuation`` equal to the absolute precision at which it is known to vanish.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import PrecisionError

INF = math.inf
DEFAULT_PRECISION = 12


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def valuation_int(n: int, p: int) -> int | float:
    """Exponent of ``p`` in the integer ``n`` (``INF`` for zero)."""
    if n == 0:
        return INF
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation_rational(q, p: int) -> int | float:
    q = Fraction(q)
    if q == 0:
        return INF
    return valuation_int(q.numerator, p) - valuation_int(q.denominator, p)


def residue(q, modulus: int) -> int:
    """Reduce a rational with denominator prime to ``modulus`` into ``[0, modulus)``."""
    q = Fraction(q)
    return q.numerator * pow(q.denominator, -1, modulus) % modulus


def parse_rational(text: str) -> Fraction:
    """Parse ``"17"``, ``"-3"`` or ``"5/6"``; raises ``ValueError`` on anything else."""
    text = text.strip()
    if not text:
        raise ValueError("empty number")
    num, sep, den = text.partition("/")
    try:
        value = Fraction(int(num), int(den)) if sep else Fraction(int(num))
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {text!r}") from None
    return value


@dataclass(frozen=True)
class PadicNumber:
    prime: int
    valuation: int | float
    unit: int
    precision: int

    def __post_init__(self):
        if self.valuation == INF:
            return
        if self.precision < 0:
            raise ValueError("negative precision")
        if self.precision == 0:
            if self.unit != 0:
                raise ValueError("inexact zero must have unit 0")
        elif self.unit % self.prime == 0:
            raise ValueError(f"unit {self.unit} is divisible by {self.prime}")

    # -- construction ---------------------------------------------------
    @classmethod
    def zero(cls, prime: int) -> PadicNumber:
        return cls(prime, INF, 0, 0)

    @classmethod
    def inexact_zero(cls, prime: int, absprec: int) -> PadicNumber:
        return cls(prime, absprec, 0, 0)

    @classmethod
    def from_rational(cls, num, den=1, prime: int = 2, precision: int = DEFAULT_PRECISION) -> PadicNumber:
        q = Fraction(num) / Fraction(den) if den != 0 else None
        if q is None:
            raise ZeroDivisionError("zero denominator")
        if precision < 1:
            raise ValueError("relative precision must be >= 1")
        if q == 0:
            return cls.zero(prime)
        v = valuation_rational(q, prime)
        u = q / Fraction(prime) ** v
        return cls(prime, v, residue(u, prime**precision), precision)

    @classmethod
    def from_residue(cls, value: int, prime: int, absprec: int) -> PadicNumber:
        """The class of the integer ``value`` modulo ``prime**absprec``."""
        value %= prime**absprec
        if value == 0:
            return cls.inexact_zero(prime, absprec)
        v = valuation_int(value, prime)
        m = absprec - v
        return cls(prime, v, (value // prime**v) % prime**m, m)

    def coerce(self, other) -> PadicNumber:
        """Bring an int or Fraction to this prime at a precision that loses nothing here."""
        if isinstance(other, PadicNumber):
            if other.prime != self.prime:
                raise ValueError(f"prime mismatch: {self.prime} vs {other.prime}")
            return other
        if not isinstance(other, (int, Rational)):
            raise TypeError(f"cannot combine PadicNumber with {type(other).__name__}")
        q = Fraction(other)
        if q == 0:
            return PadicNumber.zero(self.prime)
        v = valuation_rational(q, self.prime)
        m = max(self.precision, 1)
        if self.valuation != INF:
            m = max(m, self.valuation + self.precision - v)
        return PadicNumber.from_rational(q, 1, self.prime, m)

    # -- queries ----------------------------------------------------------
    @property
    def is_exact_zero(self) -> bool:
        return self.valuation == INF

    @property
    def absolute_precision(self) -> int | float:
        return self.valuation + self.precision

    def is_zero(self, k: int) -> bool:
        """True if the value is provably divisible by ``prime**k``."""
        if self.valuation >= k:
            return True
        if self.precision == 0:
            raise PrecisionError(f"value known only modulo {self.prime}^{self.valuation}, cannot decide mod {self.prime}^{k}")
        return False

    def is_equal(self, other, k: int) -> bool:
        """Equality to ``k`` absolute digits."""
        return (self - self.coerce(other)).is_zero(k)

    def residue(self, k: int) -> int:
        """Integer representative in ``[0, prime**k)``; needs valuation >= 0."""
        if self.valuation < 0:
            raise ValueError(f"{self} is not a p-adic integer")
        if self.valuation >= k:
            return 0
        if self.absolute_precision < k:
            raise PrecisionError(f"only {self.absolute_precision} digits known, {k} requested")
        return self.prime**self.valuation * self.unit % self.prime**k

    def to_fraction(self) -> Fraction:
        """The rational ``p**v * unit`` (an approximation of the represented class)."""
        if self.precision == 0:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.prime) ** self.valuation

    def with_precision(self, absprec: int) -> PadicNumber:
        """Drop digits so the value is known modulo ``prime**absprec``."""
        if self.valuation >= absprec:
            return PadicNumber.inexact_zero(self.prime, absprec)
        if absprec > self.absolute_precision:
            raise PrecisionError("cannot increase precision")
        m = absprec - self.valuation
        return PadicNumber(self.prime, self.valuation, self.unit % self.prime**m, m)

    def to_dict(self) -> dict:
        if self.is_exact_zero:
            return {"prime": self.prime, "valuation": "inf", "unit": None, "precision": None}
        return {"prime": self.prime, "valuation": self.valuation, "unit": self.unit, "precision": self.precision}

    def __str__(self):
        p = self.prime
        if self.is_exact_zero:
            return "0"
        if self.precision == 0:
            return f"O({p}^{self.valuation})"
        head = str(self.unit) if self.valuation == 0 else f"{self.unit}*{p}^{self.valuation}"
        return f"{head} + O({p}^{self.absolute_precision})"

    # -- arithmetic ---------------------------------------------------------
    def _shift(self, k: int) -> PadicNumber:
        if self.is_exact_zero:
            return self
        return PadicNumber(self.prime, self.valuation + k, self.unit, self.precision)

    def __neg__(self):
        if self.precision == 0:
            return self
        m = self.precision
        return PadicNumber(self.prime, self.valuation, (-self.unit) % self.prime**m, m)

    def __add__(self, other):
        try:
            other = self.coerce(other)
        except TypeError:
            return NotImplemented
        return _add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = self.coerce(other)
        except TypeError:
            return NotImplemented
        return _add(self, -other)

    def __rsub__(self, other):
        try:
            other = self.coerce(other)
        except TypeError:
            return NotImplemented
        return _add(other, -self)

    def __mul__(self, other):
        try:
            other = self.coerce(other)
        except TypeError:
            return NotImplemented
        return _mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = self.coerce(other)
        except TypeError:
            return NotImplemented
        return _div(self, other)

    def __rtruediv__(self, other):
        try:
            other = self.coerce(other)
        except TypeError:
            return NotImplemented
        return _div(other, self)

    def __pow__(self, n: int):
        if n < 0:
            return 1 / self**-n
        result = PadicNumber.from_rational(1, 1, self.prime, max(self.precision, 1))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


def _add(x: PadicNumber, y: PadicNumber) -> PadicNumber:
    if x.is_exact_zero:
        return y
    if y.is_exact_zero:
        return x
    p = x.prime
    absprec = min(x.absolute_precision, y.absolute_precision)
    vmin = min(x.valuation, y.valuation)
    if absprec <= vmin:
        return PadicNumber.inexact_zero(p, absprec)
    s = x.unit * p ** (x.valuation - vmin) + y.unit * p ** (y.valuation - vmin)
    return PadicNumber.from_residue(s, p, absprec - vmin)._shift(vmin)


def _mul(x: PadicNumber, y: PadicNumber) -> PadicNumber:
    if x.is_exact_zero or y.is_exact_zero:
        return PadicNumber.zero(x.prime)
    v = x.valuation + y.valuation
    m = min(x.precision, y.precision)
    if m == 0:
        return PadicNumber.inexact_zero(x.prime, v)
    return PadicNumber(x.prime, v, x.unit * y.unit % x.prime**m, m)


def _div(x: PadicNumber, y: PadicNumber) -> PadicNumber:
    if y.is_exact_zero:
        raise ZeroDivisionError("division by exact p-adic zero")
    if y.precision == 0:
        raise PrecisionError(f"division by a value known only to be O({y.prime}^{y.valuation})")
    if x.is_exact_zero:
        return x
    v = x.valuation - y.valuation
    m = min(x.precision, y.precision)
    if m == 0:
        return PadicNumber.inexact_zero(x.prime, v)
    pm = x.prime**m
    return PadicNumber(x.prime, v, x.unit * pow(y.unit, -1, pm) % pm, m)


def from_rational(num, den=1, prime: int = 2, m: int = DEFAULT_PRECISION) -> PadicNumber:
    return PadicNumber.from_rational(num, den, prime, m)


def arithmetic(op: str, x: PadicNumber, y: PadicNumber) -> PadicNumber:
    """Dispatch ``op`` in ``{"add", "sub", "mul", "div"}``."""
    if x.prime != y.prime:
        raise ValueError(f"prime mismatch: {x.prime} vs {y.prime}")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def valuation_of(x) -> int | float:
    if isinstance(x, PadicNumber):
        return x.valuation
    raise TypeError("valuation_of expects a PadicNumber; use valuation_rational for rationals")
