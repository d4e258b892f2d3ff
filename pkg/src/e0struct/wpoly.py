"""
The weighted ring Z[a1, a2, a3, a4, a6] with wt(a_i) = i.

Polynomials are sparse maps from exponent 5-tuples to nonzero Python ints.
Internally each exponent tuple is packed into one int (12 bits per
variable) so monomial multiplication is a single integer addition.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

VARIABLES = ("a1", "a2", "a3", "a4", "a6")
WEIGHTS = (1, 2, 3, 4, 6)

_BITS = 12
_MASK = (1 << _BITS) - 1
_MAX_EXP = _MASK


def _pack(exps: Iterable[int]) -> int:
    key = 0
    for i, e in enumerate(exps):
        if not 0 <= e <= _MAX_EXP:
            raise ValueError(f"exponent {e} out of range")
        key |= e << (_BITS * i)
    return key


def _unpack(key: int) -> tuple[int, ...]:
    return tuple((key >> (_BITS * i)) & _MASK for i in range(5))


def monomial_weight(exps: tuple[int, ...]) -> int:
    return sum(w * e for w, e in zip(WEIGHTS, exps))


def monomial_degree(exps: tuple[int, ...]) -> int:
    return sum(exps)


def _order_key(exps):
    # graded lexicographic, largest first
    return (-sum(exps), tuple(-e for e in exps))


@dataclass(frozen=True)
class WeightReport:
    is_homogeneous: bool
    weight: int | None
    linear_part: WeightedPoly


class WeightedPoly:
    """Immutable integer polynomial in a1, a2, a3, a4, a6."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, ...], int] | int = 0):
        if isinstance(terms, int):
            packed = {0: terms} if terms else {}
        else:
            packed = {}
            for exps, c in terms.items():
                if len(exps) != 5:
                    raise ValueError("exponent tuples have 5 entries (a1, a2, a3, a4, a6)")
                if c:
                    k = _pack(exps)
                    packed[k] = packed.get(k, 0) + int(c)
            packed = {k: c for k, c in packed.items() if c}
        self._terms = packed
        self._hash = None

    @classmethod
    def _from_packed(cls, packed: dict[int, int]) -> WeightedPoly:
        obj = cls.__new__(cls)
        obj._terms = packed
        obj._hash = None
        return obj

    @classmethod
    def var(cls, name: str) -> WeightedPoly:
        exps = [0] * 5
        exps[VARIABLES.index(name)] = 1
        return cls({tuple(exps): 1})

    @classmethod
    def generators(cls) -> tuple[WeightedPoly, ...]:
        return tuple(cls.var(v) for v in VARIABLES)

    # -- inspection -----------------------------------------------------------
    @property
    def terms(self) -> dict[tuple[int, ...], int]:
        """Exponent tuple -> coefficient, in canonical order."""
        items = [(_unpack(k), c) for k, c in self._terms.items()]
        items.sort(key=lambda t: _order_key(t[0]))
        return dict(items)

    def coefficients(self) -> list[int]:
        return list(self._terms.values())

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {0}

    def constant_term(self) -> int:
        return self._terms.get(0, 0)

    def weights(self) -> set[int]:
        return {monomial_weight(_unpack(k)) for k in self._terms}

    def weight_filter(self) -> WeightReport:
        ws = self.weights()
        linear = {k: c for k, c in self._terms.items() if sum(_unpack(k)) == 1}
        return WeightReport(
            is_homogeneous=len(ws) <= 1,
            weight=next(iter(ws)) if len(ws) == 1 else None,
            linear_part=WeightedPoly._from_packed(linear),
        )

    # -- ring operations ------------------------------------------------------
    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = WeightedPoly(other)
        if not isinstance(other, WeightedPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self):
        return WeightedPoly._from_packed({k: -c for k, c in self._terms.items()})

    def __add__(self, other):
        if isinstance(other, int):
            other = WeightedPoly(other)
        elif not isinstance(other, WeightedPoly):
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return WeightedPoly._from_packed(out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = WeightedPoly(other)
        elif not isinstance(other, WeightedPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return WeightedPoly._from_packed({})
            return WeightedPoly._from_packed({k: c * other for k, c in self._terms.items()})
        if not isinstance(other, WeightedPoly):
            return NotImplemented
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[int, int] = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return WeightedPoly._from_packed({k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = WeightedPoly(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- evaluation -----------------------------------------------------------
    def evaluate(self, values):
        """Substitute ``values = (a1, a2, a3, a4, a6)``; any ring elements work."""
        if len(values) != 5:
            raise ValueError("need five values (a1, a2, a3, a4, a6)")
        primes = {v.prime for v in values if hasattr(v, "prime")}
        if len(primes) > 1:
            raise ValueError(f"prime mismatch among values: {sorted(primes)}")
        total = 0
        powers: dict[tuple[int, int], object] = {}
        for k, c in self._terms.items():
            term = c
            for i, e in enumerate(_unpack(k)):
                if e:
                    key = (i, e)
                    if key not in powers:
                        powers[key] = values[i] ** e
                    term = term * powers[key]
            total = total + term
        if isinstance(total, int) and primes:
            # constant polynomial: hand back a p-adic result like the inputs
            sample = next(v for v in values if hasattr(v, "prime"))
            return sample.coerce(total)
        return total

    def evaluate_mod(self, values: tuple[int, ...], modulus: int) -> int:
        """Fast path of :meth:`evaluate` for integer residues."""
        total = 0
        pw = [[1] for _ in range(5)]
        for k, c in self._terms.items():
            term = c
            for i, e in enumerate(_unpack(k)):
                if e:
                    row = pw[i]
                    while len(row) <= e:
                        row.append(row[-1] * values[i] % modulus)
                    term *= row[e]
            total += term
        return total % modulus

    # -- rendering ------------------------------------------------------------
    def format(self, compact: bool = False) -> str:
        """Render as ``a1*a2 - 7*a3`` (or ``a1a2 - 7a3`` with ``compact``)."""
        if not self._terms:
            return "0"
        star = "" if compact else "*"
        parts = []
        for exps, c in self.terms.items():
            mono = star.join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(VARIABLES, exps) if e
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}{star}{mono}"
            parts.append((c < 0, body))
        first_neg, first = parts[0]
        out = ("-" if first_neg else "") + first
        for neg, body in parts[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"WeightedPoly({self.format()!r})"

    def to_json(self) -> list[dict]:
        return [{"exponents": list(e), "coefficient": c} for e, c in self.terms.items()]

    @classmethod
    def from_json(cls, data: list[dict]) -> WeightedPoly:
        return cls({tuple(t["exponents"]): int(t["coefficient"]) for t in data})


A1, A2, A3, A4, A6 = WeightedPoly.generators()


def poly_arithmetic(op: str, f: WeightedPoly, g: WeightedPoly | None = None) -> WeightedPoly:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "neg":
        return -f
    raise ValueError(f"unknown operation {op!r}")


def weight_filter(f: WeightedPoly) -> WeightReport:
    return f.weight_filter()


def evaluate(f: WeightedPoly, values):
    return f.evaluate(values)
