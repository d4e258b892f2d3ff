"""
Structure of E0(Q_p) for curves with additive reduction.

Two independent deciders are provided.  :func:`classify_congruence` reads the
answer off one coefficient congruence.  :func:`classify_oracle` evaluates the
formal multiplication-by-p series modulo p^2 at every unit residue and checks
whether [p](z) is divisible by p^2.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from .curve import (
    CurvePoint,
    Reduction,
    WeierstrassCurve,
    compute_invariants,
    mul_point,
    normalize_additive,
    psi_inverse,
    reduce_point,
    reduction_type,
)
from .errors import (
    AmbiguousLiftError,
    NoTorsionError,
    NotAdditiveError,
    NotNormalizedError,
    OracleInconsistencyError,
)
from .formal import CoefficientRing, mul_by_n, required_degree
from .padic import DEFAULT_PRECISION, PadicNumber, residue


class Structure(enum.Enum):
    FREE = "Zp"
    TORSION = "pZp_x_Z/p"

    def pretty(self, p: int) -> str:
        return "Z_p" if self is Structure.FREE else f"{p}Z_{p} x Z/{p}"


# p -> (label of the tested quantity, the quantity, modulus, exceptional residue)
CONGRUENCES = {
    2: ("a1+a3", lambda a: a[0] + a[2], 4, 2),
    3: ("a2", lambda a: a[1], 9, 6),
    5: ("a4", lambda a: a[3], 25, 10),
    7: ("a6", lambda a: a[4], 49, 14),
}


@dataclass
class ClassificationResult:
    prime: int
    structure: Structure
    criterion: str
    congruence_value: int | None
    oracle_agreement: bool | None = None  # None: oracle not run
    minimality_warning: bool = False
    torsion_witness: CurvePoint | None = None
    transform: tuple[int, int, int] = (0, 0, 0)
    curve: WeierstrassCurve | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        oracle = "NotRun" if self.oracle_agreement is None else self.oracle_agreement
        return {
            "prime": self.prime,
            "structure": self.structure.value,
            "criterion": self.criterion,
            "congruence_value": self.congruence_value,
            "oracle_agreement": oracle,
            "minimality_warning": self.minimality_warning,
            "torsion_witness": None if self.torsion_witness is None else self.torsion_witness.to_dict(),
            "transform": list(self.transform),
            "normalized_curve": None if self.curve is None else self.curve.to_dict()["a"],
        }


def _require_normalized_additive(curve: WeierstrassCurve):
    if not curve.is_normalized:
        raise NotNormalizedError(f"{curve} is not normalized; run normalize_additive first")
    if reduction_type(curve).kind is not Reduction.ADDITIVE:
        raise NotAdditiveError(f"{curve} does not have additive reduction")


def classify_congruence(curve: WeierstrassCurve) -> ClassificationResult:
    _require_normalized_additive(curve)
    p = curve.prime
    warn = not curve.minimality_certified
    if p not in CONGRUENCES:
        return ClassificationResult(p, Structure.FREE, "p > 7", None, minimality_warning=warn, curve=curve)
    label, quantity, modulus, bad = CONGRUENCES[p]
    value = residue(quantity(curve.a), modulus)
    structure = Structure.TORSION if value == bad else Structure.FREE
    return ClassificationResult(
        p, structure, f"{label} mod {modulus} = {value}", value, minimality_warning=warn, curve=curve
    )


def _mul_p_mod(curve: WeierstrassCurve, precision: int, degree: int, generic: bool = False):
    ring = CoefficientRing.specialized(curve.a, curve.prime, precision)
    if generic:
        # low degree: specialize the cached generic series
        return mul_by_n(curve.prime, degree).specialize(ring)
    return mul_by_n(curve.prime, degree, ring)


def oracle_valuations(curve: WeierstrassCurve) -> dict[int, int]:
    """z -> min(v_p([p](z)), 2) for every unit residue z mod p^2."""
    _require_normalized_additive(curve)
    p = curve.prime
    # mod p^2 only degrees 1 and p contribute (degree p + 2 covers the extra T^4 term at p = 2)
    series = _mul_p_mod(curve, 2, p + 2, generic=True)
    out = {}
    for z in range(1, p * p):
        if z % p:
            value = series.evaluate(z, precision=2)
            out[z] = min(value.valuation, 2)
    return out


def classify_oracle(curve: WeierstrassCurve) -> Structure | None:
    """Valuation-oracle verdict; None for p > 7 where it is not run."""
    if curve.prime not in CONGRUENCES:
        _require_normalized_additive(curve)
        return None
    vals = set(oracle_valuations(curve).values())
    if vals == {1}:
        return Structure.FREE
    if vals == {2}:
        return Structure.TORSION
    raise OracleInconsistencyError(f"mixed valuations {sorted(vals)} of [p](z) across units on {curve}")


def torsion_root(curve: WeierstrassCurve, digits: int, residue_hint: int | None = None) -> PadicNumber:
    """A unit z with [p](z) = 0 mod p^digits, found one p-adic digit at a time."""
    p = curve.prime
    k = digits
    series = _mul_p_mod(curve, k + 1, required_degree(k + 1))
    # level j: residues z mod p^j with [p](z) = 0 mod p^(j+1)
    candidates = [z for z in range(1, p) if series.evaluate(z, precision=2).valuation >= 2]
    for j in range(1, k):
        step = p**j
        candidates = [
            z + d * step
            for z in candidates
            for d in range(p)
            if series.evaluate(z + d * step, precision=j + 2).valuation >= j + 2
        ]
    if not candidates:
        raise NoTorsionError(f"no unit root of [{p}] on {curve}")
    if len({z % p**k for z in candidates}) > p - 1:
        raise AmbiguousLiftError(f"{len(candidates)} digit paths survive, at most {p - 1} expected")
    if residue_hint is not None:
        matching = [z for z in candidates if (z - residue_hint) % p == 0]
        if not matching:
            raise NoTorsionError(f"no torsion root lifts the residue {residue_hint} mod {p}")
        candidates = matching
    z = min(candidates)
    return PadicNumber.from_residue(z, p, k)


def torsion_witness(
    curve: WeierstrassCurve, digits: int = DEFAULT_PRECISION, residue_hint: int | None = None
) -> CurvePoint:
    """A point of order p in E0 with coordinates known to ``digits`` digits.

    Among the p - 1 torsion roots the one with the smallest residue mod p is
    returned unless ``residue_hint`` picks another.
    """
    if classify_congruence(curve).structure is Structure.FREE:
        raise NoTorsionError(f"E0(Q_{curve.prime}) is Z_{curve.prime} on {curve}; no p-torsion")
    z = torsion_root(curve, digits, residue_hint)
    return psi_inverse(curve, z, digits)


def classify(
    curve: WeierstrassCurve,
    strict: bool = False,
    run_oracle: bool = True,
    witness_digits: int | None = None,
) -> ClassificationResult:
    """Normalize if needed (unless ``strict``), then classify and optionally cross-check and find torsion."""
    transform = (0, 0, 0)
    if not curve.is_normalized:
        if strict:
            raise NotNormalizedError(f"{curve} is not normalized and --strict forbids normalizing it")
        norm = normalize_additive(curve)
        curve, transform = norm.curve, norm.transform
    result = classify_congruence(curve)
    result.transform = transform
    if run_oracle:
        verdict = classify_oracle(curve)
        result.oracle_agreement = None if verdict is None else verdict is result.structure
    if witness_digits is not None and result.structure is Structure.TORSION:
        result.torsion_witness = torsion_witness(curve, witness_digits)
    return result


# ---------------------------------------------------------------------------
# the four worked examples

WORKED_EXAMPLES = (
    ("E2", 2, (0, 0, -2, 0, -2), (1, 1)),
    ("E3", 3, (0, -3, 0, 3, 0), (1, 1)),
    ("E5", 5, (0, 20, -5, -15, 0), (1, -1)),
    ("E7", 7, (7, 0, -28, 7, -35), (2, 1)),
)


@dataclass
class ExampleRow:
    name: str
    prime: int
    coefficients: tuple[int, ...]
    point: tuple[int, int]
    additive: bool
    already_normalized: bool
    congruence: str
    oracle: str
    torsion_verified: bool
    good_reduction: bool

    @property
    def passed(self) -> bool:
        expected = Structure.TORSION.value
        return (
            self.additive
            and self.already_normalized
            and self.congruence == expected
            and self.oracle == expected
            and self.torsion_verified
            and self.good_reduction
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "p": self.prime,
            "a": list(self.coefficients),
            "point": list(self.point),
            "additive": self.additive,
            "normalized": self.already_normalized,
            "congruence": self.congruence,
            "oracle": self.oracle,
            "torsion_verified": self.torsion_verified,
            "good_reduction": self.good_reduction,
            "passed": self.passed,
        }


def _example_row(name, p, a, pt) -> ExampleRow:
    curve = compute_invariants(a, p)
    additive = reduction_type(curve).kind is Reduction.ADDITIVE
    normalized = curve.is_normalized and normalize_additive(curve).is_identity
    try:
        congruence = classify_congruence(curve).structure.value
    except (NotAdditiveError, NotNormalizedError) as exc:
        congruence = exc.code
    try:
        oracle = classify_oracle(curve)
        oracle = "NotRun" if oracle is None else oracle.value
    except (NotAdditiveError, NotNormalizedError, OracleInconsistencyError) as exc:
        oracle = exc.code
    P = CurvePoint(Fraction(pt[0]), Fraction(pt[1]))
    on_curve = curve.contains(P)
    torsion = on_curve and mul_point(curve, p, P).is_infinity
    good = False
    if on_curve:
        red = reduce_point(curve, P)
        good = red.in_E0 and not red.in_E1
    return ExampleRow(name, p, a, pt, additive, normalized, congruence, oracle, torsion, good)


def verify_paper_examples() -> list[ExampleRow]:
    return [_example_row(*entry) for entry in WORKED_EXAMPLES]


def _pretty(value: str, p: int) -> str:
    try:
        return Structure(value).pretty(p)
    except ValueError:
        return value


def format_report(rows: list[ExampleRow]) -> str:
    header = f"{'curve':<5} {'p':>2}  {'additive':<8} {'structure':<12} {'oracle':<12} {'point':<8} {'p*P = O':<8} {'good red.':<9} status"
    lines = [header]
    for r in rows:
        yes = lambda b: "yes" if b else "no"  # noqa: E731
        struct = _pretty(r.congruence, r.prime)
        oracle = _pretty(r.oracle, r.prime)
        lines.append(
            f"{r.name:<5} {r.prime:>2}  {yes(r.additive):<8} {struct:<12} {oracle:<12} "
            f"{str(r.point).replace(' ', ''):<8} {yes(r.torsion_verified):<8} {yes(r.good_reduction):<9} "
            f"{'PASS' if r.passed else 'FAIL'}"
        )
    return "\n".join(lines)
