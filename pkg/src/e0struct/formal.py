"""
Formal group of a Weierstrass curve as truncated power series.

Everything here is built over a :class:`CoefficientRing`: either the generic
weighted ring Z[a1, a2, a3, a4, a6] (coefficients are
:class:`~e0struct.wpoly.WeightedPoly`) or a concrete curve over Z_p known
modulo ``p**N`` (coefficients are integer residues).  The same construction
code serves both.

The group law comes from the chord construction in the ``(z, w)`` chart,
``z = -x/y``, ``w = -1/y``: the line through ``(z1, w(z1))`` and
``(z2, w(z2))`` meets the curve in a third point ``z3`` and the sum is the
formal inverse of ``z3``.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Iterable

from .errors import NotNormalizedError, TruncationError
from .padic import INF, PadicNumber, residue, valuation_rational
from .wpoly import WeightedPoly

__all__ = [
    "CoefficientRing",
    "GENERIC",
    "GroupLaw",
    "TruncatedSeries",
    "compute_w",
    "clear_cache",
    "compute_group_law",
    "formal_add",
    "formal_multiple",
    "mul_by_n",
    "specialize_and_eval",
    "required_degree",
]


@dataclass(frozen=True)
class CoefficientRing:
    """Where series coefficients live.

    ``a`` holds the images of (a1, a2, a3, a4, a6).  For the generic ring
    ``prime`` is None; otherwise coefficients are residues modulo
    ``prime**precision``.
    """

    a: tuple
    prime: int | None = None
    precision: int | None = None

    @property
    def is_generic(self) -> bool:
        return self.prime is None

    @property
    def modulus(self) -> int | None:
        return None if self.prime is None else self.prime**self.precision

    @classmethod
    def specialized(cls, a_values: Iterable, prime: int, precision: int) -> CoefficientRing:
        """Residues of p-integral ``a_values`` (rationals or PadicNumbers) modulo ``prime**precision``."""
        m = prime**precision
        res = []
        for a in a_values:
            if isinstance(a, PadicNumber):
                if a.prime != prime:
                    raise ValueError(f"prime mismatch: {a.prime} vs {prime}")
                res.append(a.residue(precision))
            else:
                if valuation_rational(a, prime) < 0:
                    raise ValueError(f"coefficient {a} is not {prime}-integral")
                res.append(residue(a, m))
        if len(res) != 5:
            raise ValueError("need five coefficients (a1, a2, a3, a4, a6)")
        return cls(tuple(res), prime, precision)

    def coerce(self, c):
        if self.prime is None:
            return c if isinstance(c, WeightedPoly) else WeightedPoly(int(c))
        if isinstance(c, WeightedPoly):
            return c.evaluate_mod(self.a, self.modulus)
        return residue(c, self.modulus)

    def reduce(self, c):
        return c if self.prime is None else c % self.modulus

    def unit_inverse(self, c):
        if self.prime is None:
            if not c.is_constant() or c.constant_term() not in (1, -1):
                raise ValueError(f"{c} is not a unit of the generic ring")
            return c.constant_term()
        return pow(c, -1, self.modulus)

    def lower_precision(self, precision: int) -> CoefficientRing:
        if self.prime is None:
            raise ValueError("generic ring has no precision")
        m = self.prime**precision
        return CoefficientRing(tuple(a % m for a in self.a), self.prime, precision)


GENERIC = CoefficientRing(WeightedPoly.generators())


def _same_ring(r1: CoefficientRing, r2: CoefficientRing):
    if r1 != r2:
        raise ValueError("series live over different coefficient rings")


def _group_by_degree(coeffs: dict, degree: int) -> list[list]:
    groups: list[list] = [[] for _ in range(degree + 1)]
    for e, c in coeffs.items():
        d = sum(e)
        if d <= degree:
            groups[d].append((e, c))
    return groups


def _add_exps(e1, e2):
    if len(e1) == 1:
        return (e1[0] + e2[0],)
    if len(e1) == 2:
        return (e1[0] + e2[0], e1[1] + e2[1])
    return tuple(x + y for x, y in zip(e1, e2))


def _mul_dict(a: dict, b: dict, degree: int, modulus: int | None) -> dict:
    gb = _group_by_degree(b, degree)
    out: dict = {}
    get = out.get
    for ea, ca in a.items():
        da = sum(ea)
        for db in range(degree - da + 1):
            for eb, cb in gb[db]:
                k = _add_exps(ea, eb)
                out[k] = get(k, 0) + ca * cb
    if modulus is None:
        return {k: c for k, c in out.items() if c}
    out = {k: c % modulus for k, c in out.items()}
    return {k: c for k, c in out.items() if c}


def _mul_kronecker(a: dict, b: dict, degree: int, arity: int, modulus: int) -> dict:
    """Truncated product of residue series via one big-integer multiplication."""
    stride = 2 * degree + 1
    bound = (modulus - 1) ** 2 * (degree + 1) ** arity
    nbytes = (bound.bit_length() + 8) // 8
    nslots = stride**arity

    def pack(s):
        buf = bytearray(nbytes * nslots)
        for e, c in s.items():
            idx = e[0] if arity == 1 else e[0] * stride + e[1]
            off = idx * nbytes
            buf[off : off + nbytes] = c.to_bytes(nbytes, "little")
        return int.from_bytes(buf, "little")

    prod = pack(a) * pack(b)
    raw = prod.to_bytes(nbytes * nslots + nbytes, "little")
    out = {}
    frombytes = int.from_bytes
    if arity == 1:
        for i in range(degree + 1):
            off = i * nbytes
            c = frombytes(raw[off : off + nbytes], "little") % modulus
            if c:
                out[(i,)] = c
    else:
        for d in range(degree + 1):
            for i in range(d + 1):
                off = (i * stride + d - i) * nbytes
                c = frombytes(raw[off : off + nbytes], "little") % modulus
                if c:
                    out[(i, d - i)] = c
    return out


class TruncatedSeries:
    """Power series in T, in (X, Y) or in (X, Y, Z), truncated above total degree ``degree``.

    Coefficients are keyed by exponent tuples: ``(n,)`` for series in T and
    ``(i, j)`` for ``X**i * Y**j``.  Instances are immutable.
    """

    __slots__ = ("arity", "degree", "ring", "_coeffs")

    def __init__(self, coeffs: dict, arity: int, degree: int, ring: CoefficientRing = GENERIC):
        if degree < 0:
            raise ValueError("truncation degree must be >= 0")
        self.arity = arity
        self.degree = degree
        self.ring = ring
        clean = {}
        for e, c in coeffs.items():
            e = tuple(e)
            if len(e) != arity:
                raise ValueError(f"exponent {e} does not match arity {arity}")
            if sum(e) <= degree:
                c = ring.coerce(c)
                if c:
                    clean[e] = c
        self._coeffs = clean

    @classmethod
    def _raw(cls, coeffs: dict, arity: int, degree: int, ring: CoefficientRing) -> TruncatedSeries:
        obj = cls.__new__(cls)
        obj.arity = arity
        obj.degree = degree
        obj.ring = ring
        obj._coeffs = coeffs
        return obj

    @classmethod
    def variable(cls, index: int, arity: int, degree: int, ring: CoefficientRing = GENERIC) -> TruncatedSeries:
        e = [0] * arity
        e[index] = 1
        return cls({tuple(e): 1}, arity, degree, ring)

    @classmethod
    def constant(cls, c, arity: int, degree: int, ring: CoefficientRing = GENERIC) -> TruncatedSeries:
        return cls({(0,) * arity: c}, arity, degree, ring)

    # -- inspection -----------------------------------------------------------
    @property
    def coefficient_mode(self) -> str:
        return "generic" if self.ring.is_generic else f"specialized({self.ring.prime})"

    @property
    def coeffs(self) -> dict:
        return dict(self._coeffs)

    def __getitem__(self, exps):
        if isinstance(exps, int):
            exps = (exps,)
        exps = tuple(exps)
        if sum(exps) > self.degree:
            raise IndexError(f"degree {sum(exps)} is above the truncation degree {self.degree}")
        default = WeightedPoly(0) if self.ring.is_generic else 0
        return self._coeffs.get(exps, default)

    def coefficient(self, exps):
        """Coefficient as stored; specialized series return a PadicNumber."""
        c = self[exps]
        if self.ring.is_generic:
            return c
        return PadicNumber.from_residue(c, self.ring.prime, self.ring.precision)

    def homogeneous_part(self, n: int) -> dict:
        return {e: c for e, c in self._coeffs.items() if sum(e) == n}

    def terms(self) -> list:
        """(exponents, coefficient) pairs in canonical order."""
        return sorted(self._coeffs.items(), key=lambda t: (sum(t[0]), tuple(-x for x in t[0])))

    def valuation(self) -> int | float:
        """Smallest total degree of a nonzero term (INF for the zero series)."""
        return min((sum(e) for e in self._coeffs), default=INF)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.arity == other.arity
            and self.degree == other.degree
            and self.ring == other.ring
            and self._coeffs == other._coeffs
        )

    def __hash__(self):
        return hash((self.arity, self.degree, frozenset(self._coeffs.items())))

    def __repr__(self):
        return f"TruncatedSeries({self.format()!r}, degree={self.degree})"

    def __str__(self):
        return self.format()

    # -- arithmetic -------------------------------------------------------------
    def _check(self, other: TruncatedSeries):
        if self.arity != other.arity:
            raise ValueError("series have different arity")
        _same_ring(self.ring, other.ring)

    def truncate(self, degree: int) -> TruncatedSeries:
        degree = min(degree, self.degree)
        return TruncatedSeries._raw(
            {e: c for e, c in self._coeffs.items() if sum(e) <= degree}, self.arity, degree, self.ring
        )

    def _lift(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return other
        return TruncatedSeries.constant(other, self.arity, self.degree, self.ring)

    def __add__(self, other):
        other = self._lift(other)
        degree = min(self.degree, other.degree)
        out = {e: c for e, c in self._coeffs.items() if sum(e) <= degree}
        for e, c in other._coeffs.items():
            if sum(e) <= degree:
                out[e] = self.ring.reduce(out[e] + c) if e in out else c
        return TruncatedSeries._raw({e: c for e, c in out.items() if c}, self.arity, degree, self.ring)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw(
            {e: self.ring.reduce(-c) for e, c in self._coeffs.items()}, self.arity, self.degree, self.ring
        )

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> TruncatedSeries:
        """Multiply every coefficient by the ring element ``c``."""
        c = self.ring.coerce(c)
        if not c:
            return TruncatedSeries._raw({}, self.arity, self.degree, self.ring)
        out = {e: self.ring.reduce(v * c) for e, v in self._coeffs.items()}
        return TruncatedSeries._raw({e: v for e, v in out.items() if v}, self.arity, self.degree, self.ring)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check(other)
        degree = min(self.degree, other.degree)
        ring = self.ring
        if not ring.is_generic and self.arity <= 2 and degree >= 6 and self._coeffs and other._coeffs:
            out = _mul_kronecker(self._coeffs, other._coeffs, degree, self.arity, ring.modulus)
        else:
            out = _mul_dict(self._coeffs, other._coeffs, degree, ring.modulus)
        return TruncatedSeries._raw(out, self.arity, degree, ring)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = TruncatedSeries.constant(1, self.arity, self.degree, self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, index: int, k: int = 1) -> TruncatedSeries:
        """Multiply by the k-th power of variable ``index``."""
        out = {}
        for e, c in self._coeffs.items():
            e2 = list(e)
            e2[index] += k
            if sum(e2) <= self.degree:
                out[tuple(e2)] = c
        return TruncatedSeries._raw(out, self.arity, self.degree, self.ring)

    def inverse(self) -> TruncatedSeries:
        """Multiplicative inverse; the constant term must be a unit."""
        one = TruncatedSeries.constant(1, self.arity, self.degree, self.ring)
        return one / self

    def __truediv__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(other, self.arity, self.degree, self.ring)
        self._check(other)
        degree = min(self.degree, other.degree)
        ring = self.ring
        c0 = other._coeffs.get((0,) * self.arity)
        if c0 is None:
            raise ZeroDivisionError("divisor has no constant term")
        inv0 = ring.unit_inverse(c0)
        if not ring.is_generic and self.arity <= 2 and degree >= 6:
            # Newton iteration: q <- q * (2 - d*q), each step doubles the correct degree
            q = TruncatedSeries.constant(inv0, self.arity, degree, ring)
            d = other.truncate(degree)
            correct = 0
            while correct < degree:
                q = q * (2 - d * q)
                correct = 2 * correct + 1
            return self.truncate(degree) * q
        den = _group_by_degree(other._coeffs, degree)
        num = _group_by_degree(self._coeffs, degree)
        q: list[dict] = []
        for d in range(degree + 1):
            acc = dict(num[d])
            for k in range(1, d + 1):
                if not den[k] or not q[d - k]:
                    continue
                for e1, c1 in den[k]:
                    for e2, c2 in q[d - k].items():
                        key = _add_exps(e1, e2)
                        acc[key] = acc.get(key, 0) - c1 * c2
            q.append({e: ring.reduce(c * inv0) for e, c in acc.items() if c})
            q[-1] = {e: c for e, c in q[-1].items() if c}
        out = {}
        for part in q:
            out.update(part)
        return TruncatedSeries._raw(out, self.arity, degree, ring)

    # -- composition ------------------------------------------------------------
    def embed(self, arity: int, positions: tuple[int, ...]) -> TruncatedSeries:
        """View as a series in ``arity`` variables, sending variable i to ``positions[i]``."""
        out = {}
        for e, c in self._coeffs.items():
            e2 = [0] * arity
            for i, p in enumerate(positions):
                e2[p] += e[i]
            out[tuple(e2)] = c
        return TruncatedSeries._raw(out, arity, self.degree, self.ring)

    def substitute(self, *args: TruncatedSeries) -> TruncatedSeries:
        """Compose: replace variable i by ``args[i]`` (all without constant term)."""
        if len(args) != self.arity:
            raise ValueError(f"need {self.arity} series to substitute")
        if self.arity > 2:
            raise NotImplementedError("substitution into series of more than two variables")
        target = args[0]
        for s in args:
            if s.arity != target.arity:
                raise ValueError("substituted series must share one arity")
            _same_ring(s.ring, self.ring)
            if (0,) * s.arity in s._coeffs:
                raise ValueError("substituted series must have zero constant term")
        degree = min([self.degree] + [s.degree for s in args])
        zero = TruncatedSeries._raw({}, target.arity, degree, self.ring)

        by_first: dict[int, list] = {}
        for e, c in self._coeffs.items():
            by_first.setdefault(e[0], []).append((e, c))
        if not by_first:
            return zero

        inner: dict[int, TruncatedSeries] = {}
        if self.arity == 1:
            for i, items in by_first.items():
                inner[i] = TruncatedSeries.constant(items[0][1], target.arity, degree, self.ring)
        else:
            second = args[1].truncate(degree)
            top = max(e[1] for e in self._coeffs)
            powers = [TruncatedSeries.constant(1, target.arity, degree, self.ring)]
            for _ in range(top):
                powers.append(powers[-1] * second)
            for i, items in by_first.items():
                acc: dict = {}
                for e, c in items:
                    for ep, cp in powers[e[1]]._coeffs.items():
                        acc[ep] = acc.get(ep, 0) + c * cp
                acc = {k: self.ring.reduce(v) for k, v in acc.items()}
                inner[i] = TruncatedSeries._raw(
                    {k: v for k, v in acc.items() if v}, target.arity, degree, self.ring
                )

        first = args[0].truncate(degree)
        top = max(by_first)
        result = inner.get(top, zero)
        for i in range(top - 1, -1, -1):
            result = result * first
            if i in inner:
                result = result + inner[i]
        return result

    # -- specialization and evaluation ------------------------------------------
    def specialize(self, ring: CoefficientRing) -> TruncatedSeries:
        """Substitute the concrete coefficients of ``ring`` into a generic series."""
        if not self.ring.is_generic:
            if ring.prime == self.ring.prime and ring.precision <= self.ring.precision:
                m = ring.modulus
                out = {e: c % m for e, c in self._coeffs.items()}
                return TruncatedSeries._raw({e: c for e, c in out.items() if c}, self.arity, self.degree, ring)
            raise ValueError("series is already specialized to another ring")
        m = ring.modulus
        out = {}
        for e, c in self._coeffs.items():
            v = c.evaluate_mod(ring.a, m)
            if v:
                out[e] = v
        return TruncatedSeries._raw(out, self.arity, self.degree, ring)

    def evaluate(self, *points, precision: int | None = None) -> PadicNumber:
        """Value of a specialized series at p-adic integers, modulo ``p**precision``.

        No truncation-sufficiency check is made here; see :func:`specialize_and_eval`.
        """
        if self.ring.is_generic:
            raise ValueError("specialize the series before evaluating it")
        if len(points) != self.arity:
            raise ValueError(f"need {self.arity} evaluation points")
        p = self.ring.prime
        n = self.ring.precision if precision is None else precision
        if n > self.ring.precision:
            raise TruncationError(f"coefficients known only modulo {p}^{self.ring.precision}")
        m = p**n
        vals = []
        for z in points:
            if isinstance(z, PadicNumber):
                if z.prime != p:
                    raise ValueError(f"prime mismatch: {z.prime} vs {p}")
                vals.append(z.residue(n))
            else:
                if valuation_rational(z, p) < 0:
                    raise ValueError(f"{z} is not a {p}-adic integer")
                vals.append(residue(z, m))
        total = 0
        if self.arity == 1:
            z = vals[0]
            for d in range(self.degree, -1, -1):
                total = (total * z + self._coeffs.get((d,), 0)) % m
        else:
            pw = []
            for z in vals:
                row = [1]
                for _ in range(self.degree):
                    row.append(row[-1] * z % m)
                pw.append(row)
            for (i, j), c in self._coeffs.items():
                total += c * pw[0][i] * pw[1][j]
            total %= m
        return PadicNumber.from_residue(total, p, n)

    # -- rendering ----------------------------------------------------------------
    def _monomial(self, e) -> str:
        names = ("T",) if self.arity == 1 else ("X", "Y", "Z")[: self.arity]
        return "".join(v if k == 1 else f"{v}^{k}" for v, k in zip(names, e) if k)

    def format(self) -> str:
        """Human-readable text such as ``2T - a1T^2 - 2a2T^3 + (a1a2 - 7a3)T^4``."""
        pieces = []
        m = self.ring.modulus
        for e, c in self.terms():
            mono = self._monomial(e)
            if self.ring.is_generic:
                tc = c.terms
                if len(tc) == 1:
                    (exps, k), = tc.items()
                    neg = k < 0
                    body = WeightedPoly({exps: abs(k)}).format(compact=True)
                    if body == "1" and mono:
                        body = ""
                else:
                    neg = next(iter(tc.values())) < 0
                    body = "(" + (-c if neg else c).format(compact=True) + ")"
            else:
                k = c if c <= m // 2 else c - m
                neg = k < 0
                body = "" if abs(k) == 1 and mono else str(abs(k))
            pieces.append((neg, body + mono or "1"))
        if not pieces:
            return "0"
        neg, text = pieces[0]
        out = ("-" if neg else "") + text
        for neg, text in pieces[1:]:
            out += (" - " if neg else " + ") + text
        return out

    def to_json(self) -> dict:
        terms = []
        for e, c in self.terms():
            if self.ring.is_generic:
                terms.append({"exponents": list(e), "coefficient": c.to_json()})
            else:
                terms.append({"exponents": list(e), "coefficient": c})
        data = {
            "arity": self.arity,
            "truncation_degree": self.degree,
            "mode": "generic" if self.ring.is_generic else "specialized",
            "terms": terms,
            "text": self.format(),
        }
        if not self.ring.is_generic:
            data["prime"] = self.ring.prime
            data["precision"] = self.ring.precision
        return data


# ---------------------------------------------------------------------------
# constructions


def _zero_coeff(ring):
    return WeightedPoly(0) if ring.is_generic else 0


def compute_w(degree: int, ring: CoefficientRing = GENERIC) -> TruncatedSeries:
    """The series w(T) = -1/y in the parameter T = -x/y, truncated at ``degree``.

    Solves w = T^3 + a1 T w + a2 T^2 w + a3 w^2 + a4 T w^2 + a6 w^3 one
    coefficient at a time; the coefficient of T^n only needs lower ones.
    """
    if degree < 3:
        raise ValueError("w(T) starts in degree 3; need degree >= 3")
    a1, a2, a3, a4, a6 = ring.a
    red = ring.reduce
    zero = _zero_coeff(ring)
    w = [zero] * (degree + 1)
    w2 = [zero] * (degree + 1)
    w3 = [zero] * (degree + 1)
    for n in range(3, degree + 1):
        s2 = zero
        for i in range(3, n - 2):
            s2 = s2 + w[i] * w[n - i]
        w2[n] = red(s2)
        s3 = zero
        for i in range(3, n - 5):
            s3 = s3 + w[i] * w2[n - i]
        w3[n] = red(s3)
        c = a1 * w[n - 1] + a2 * w[n - 2] + a3 * w2[n] + a4 * w2[n - 1] + a6 * w3[n]
        if n == 3:
            c = c + 1
        w[n] = red(c)
    return TruncatedSeries._raw({(n,): c for n, c in enumerate(w) if c}, 1, degree, ring)


@dataclass(frozen=True)
class GroupLaw:
    F: TruncatedSeries
    inv: TruncatedSeries


def _third_point(lam: TruncatedSeries, nu: TruncatedSeries, first: TruncatedSeries, second: TruncatedSeries, ring):
    """Given the chord w = lam*z + nu through z = first, second, return -(third point)."""
    a1, a2, a3, a4, a6 = ring.a
    lam2 = lam * lam
    num = lam.scale(a1) + nu.scale(a2) + lam2.scale(a3) + (lam * nu).scale(2 * a4) + (lam2 * nu).scale(3 * a6)
    den = 1 + lam.scale(a2) + lam2.scale(a4) + (lam2 * lam).scale(a6)
    z3 = -first - second - num / den
    w3 = lam * z3 + nu
    return z3 / (-1 + z3.scale(a1) + w3.scale(a3))


def _inverse_series(w: TruncatedSeries, ring) -> TruncatedSeries:
    a1, _, a3, _, _ = ring.a
    t = TruncatedSeries.variable(0, 1, w.degree, ring)
    return t / (-1 + t.scale(a1) + w.scale(a3))


_CACHE: dict = {}
_CACHE_LOCK = threading.RLock()


def _cached(key, build):
    with _CACHE_LOCK:
        if key in _CACHE:
            return _CACHE[key]
        value = build()
        _CACHE[key] = value
        return value


def clear_cache():
    """Forget cached generic series (used to time cold builds)."""
    with _CACHE_LOCK:
        _CACHE.clear()


def compute_group_law(degree: int, ring: CoefficientRing = GENERIC) -> GroupLaw:
    """Formal group law F(X, Y) and formal inverse, truncated at ``degree``."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if ring.is_generic:
        return _cached(("F", degree), lambda: _build_group_law(degree, ring))
    return _build_group_law(degree, ring)


def _build_group_law(degree: int, ring: CoefficientRing) -> GroupLaw:
    D = degree
    w = compute_w(max(D + 1, 3), ring)
    A = {e[0]: c for e, c in w._coeffs.items()}
    lam_c: dict = {}
    for n, c in A.items():
        k = n - 1
        if k > D:
            continue
        for i in range(k + 1):
            lam_c[(i, k - i)] = c
    lam = TruncatedSeries._raw(lam_c, 2, D, ring)
    x = TruncatedSeries.variable(0, 2, D, ring)
    y = TruncatedSeries.variable(1, 2, D, ring)
    wx = TruncatedSeries._raw({(n, 0): c for n, c in A.items() if n <= D}, 2, D, ring)
    nu = wx - lam.shift(0)
    F = _third_point(lam, nu, x, y, ring)
    inv = _inverse_series(w.truncate(D), ring)
    return GroupLaw(F, inv)


def formal_add(u: TruncatedSeries, v: TruncatedSeries, w: TruncatedSeries | None = None) -> TruncatedSeries:
    """F(u, v) for two univariate series without building the bivariate law.

    The chord slope uses the divided difference of w written through the
    complete homogeneous sums h_k(u, v) = sum_i u^i v^(k-i), so u == v is fine.
    """
    if u.arity != 1 or v.arity != 1:
        raise ValueError("formal_add works on series in one variable")
    _same_ring(u.ring, v.ring)
    ring = u.ring
    D = min(u.degree, v.degree)
    u, v = u.truncate(D), v.truncate(D)
    if w is None:
        w = compute_w(max(D + 1, 3), ring)
    A = {e[0]: c for e, c in w._coeffs.items() if e[0] <= D + 1}
    one = TruncatedSeries.constant(1, 1, D, ring)
    lam = TruncatedSeries._raw({}, 1, D, ring)
    h = one
    vk = one
    upow = one
    wu = TruncatedSeries._raw({}, 1, D, ring)
    top = max(A, default=0)
    for k in range(1, top):
        vk = vk * v
        h = u * h + vk
        upow = upow * u
        if (k + 1) in A:
            lam = lam + h.scale(A[k + 1])
        if k in A:
            wu = wu + upow.scale(A[k])
    if top in A and top <= D:
        wu = wu + (upow * u).scale(A[top])
    nu = wu - lam * u
    return _third_point(lam, nu, u, v, ring)


def formal_multiple(n: int, degree: int, ring: CoefficientRing = GENERIC) -> TruncatedSeries:
    """[n](T) by double-and-add with :func:`formal_add`."""
    if n < 1:
        raise ValueError("n must be >= 1")
    w = compute_w(max(degree + 1, 3), ring)
    t = TruncatedSeries.variable(0, 1, degree, ring)
    result = None
    base = t
    while n:
        if n & 1:
            result = base if result is None else formal_add(result, base, w)
        n >>= 1
        if n:
            base = formal_add(base, base, w)
    return result


def mul_by_n(n: int, degree: int, ring: CoefficientRing = GENERIC) -> TruncatedSeries:
    """Multiplication-by-n series [n](T), with [1] = T and [n] = F([n-1](T), T).

    Generic series are built by composing with the cached group law and
    cached per (n, degree).  Specialized series go through
    :func:`formal_multiple`, which stays cheap at high degree.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if not ring.is_generic:
        return formal_multiple(n, degree, ring)
    return _cached(("mul", n, degree), lambda: _compose_multiple(n, degree))


def _compose_multiple(n: int, degree: int) -> TruncatedSeries:
    t = TruncatedSeries.variable(0, 1, degree)
    if n == 1:
        return t
    return compute_group_law(degree).F.substitute(mul_by_n(n - 1, degree), t)


def required_degree(digits: int) -> int:
    """Truncation degree that pins a series value at p-adic integers modulo p**digits.

    A degree-d coefficient has weight d - 1, and with every a_i in pZ_p a
    weight-w monomial has valuation at least ceil(w / 6).
    """
    return 6 * digits + 1


def specialize_and_eval(
    series: TruncatedSeries,
    coefficients,
    z,
    precision: int,
    prime: int | None = None,
) -> PadicNumber:
    """Value of ``series`` on a normalized curve at ``z`` (a point, or a pair for F), mod p**precision.

    The prime is read off p-adic inputs or a specialized series; pass ``prime``
    when everything is a plain rational.
    """
    if series.degree < required_degree(precision):
        raise TruncationError(
            f"truncation degree {series.degree} cannot pin the value mod p^{precision}; "
            f"need at least {required_degree(precision)}"
        )
    points = z if isinstance(z, tuple) else (z,)
    primes = {c.prime for c in coefficients if isinstance(c, PadicNumber)}
    primes |= {q.prime for q in points if isinstance(q, PadicNumber)}
    if not series.ring.is_generic:
        primes.add(series.ring.prime)
    if prime is not None:
        primes.add(prime)
    if len(primes) != 1:
        raise ValueError("cannot determine a single prime")
    p = primes.pop()
    for c in coefficients:
        v = c.valuation if isinstance(c, PadicNumber) else valuation_rational(c, p)
        if v < 1:
            raise NotNormalizedError(f"coefficient {c} has valuation {v} < 1")
    for q in points:
        v = q.valuation if isinstance(q, PadicNumber) else valuation_rational(q, p)
        if v < 0:
            raise ValueError(f"evaluation point {q} is not a p-adic integer")
    ring = CoefficientRing.specialized(coefficients, p, precision)
    if not series.ring.is_generic:
        r = series.ring
        if r.prime != p or r.precision < precision or r.lower_precision(precision).a != ring.a:
            raise ValueError("series was specialized to a different curve or precision")
    concrete = series.specialize(ring)
    return concrete.evaluate(*points, precision=precision)
