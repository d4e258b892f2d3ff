"""Command line front end: ``e0struct <subcommand> -p P -a a1,a2,a3,a4,a6 ...``."""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

from .classify import classify, format_report, torsion_root, verify_paper_examples
from .curve import (
    WeierstrassCurve,
    compute_invariants,
    filtration_level,
    normalize_additive,
    parse_point,
    psi,
    psi_inverse,
    reduce_point,
    reduction_type,
)
from .errors import E0Error, NoTorsionError
from .formal import (
    GENERIC,
    CoefficientRing,
    compute_group_law,
    compute_w,
    mul_by_n,
    required_degree,
    specialize_and_eval,
)
from .padic import DEFAULT_PRECISION, INF, is_prime, parse_rational

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2

CURVE_COMMANDS = ("classify", "invariants", "normalize", "torsion", "filtration")


class UsageError(ValueError):
    """Malformed input; maps to exit code 2."""


def parse_coefficients(text: str):
    parts = [s for s in text.replace(" ", "").split(",")]
    if len(parts) != 5:
        raise UsageError(f"expected five comma-separated coefficients a1,a2,a3,a4,a6, got {text!r}")
    try:
        return tuple(parse_rational(s) for s in parts)
    except ValueError as exc:
        raise UsageError(f"bad coefficient in {text!r}: {exc}") from None


def parse_prime(value) -> int:
    try:
        p = int(value)
    except (TypeError, ValueError):
        raise UsageError(f"prime must be an integer, got {value!r}") from None
    if not is_prime(p):
        raise UsageError(f"{p} is not prime")
    return p


def parse_curve_line(line: str):
    """One batch line: ``{"p": 5, "a": [...]}`` or ``5 0,20,-5,-15,0``."""
    line = line.strip()
    if line.startswith("{"):
        try:
            data = json.loads(line)
            a = data["a"]
            p = data["p"]
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad JSON curve description {line!r}: {exc}") from None
        if not isinstance(a, list):
            raise UsageError("'a' must be a list of five numbers")
        return parse_prime(p), parse_coefficients(",".join(str(x) for x in a))
    fields = line.split(None, 1)
    if len(fields) != 2:
        raise UsageError(f"expected 'p a1,a2,a3,a4,a6', got {line!r}")
    return parse_prime(fields[0]), parse_coefficients(fields[1])


def dumps(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, indent=2)


def _clean(obj):
    if isinstance(obj, float) and obj == INF:
        return "inf"
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


# ---------------------------------------------------------------------------
# handlers return (report dict, text rendering)


def _curve_from(args) -> WeierstrassCurve:
    if args.p is None or args.a is None:
        raise UsageError("this subcommand needs -p and -a")
    return compute_invariants(parse_coefficients(args.a), parse_prime(args.p))


def cmd_invariants(curve: WeierstrassCurve, args):
    red = reduction_type(curve)
    data = curve.to_dict()
    data["reduction"] = red.kind.value
    data["singular_point"] = None if red.singular_point is None else list(red.singular_point)
    data["normalized"] = curve.is_normalized
    data["minimality_certified"] = curve.minimality_certified
    text = "\n".join(f"{k}: {v}" for k, v in sorted(_clean(data).items()))
    return data, text


def cmd_normalize(curve: WeierstrassCurve, args):
    norm = normalize_additive(curve)
    data = {
        "p": curve.prime,
        "input": curve.to_dict()["a"],
        "normalized": norm.curve.to_dict()["a"],
        "transform": {"r": norm.transform[0], "s": norm.transform[1], "t": norm.transform[2]},
    }
    r, s, t = norm.transform
    text = f"[{', '.join(map(str, data['normalized']))}]  via x = x' + {r}, y = y' + {s}x' + {t}"
    return data, text


def cmd_classify(curve: WeierstrassCurve, args):
    result = classify(curve, strict=args.strict, witness_digits=args.precision)
    data = result.to_dict()
    lines = [
        f"structure: {result.structure.pretty(curve.prime)}",
        f"criterion: {result.criterion}",
        f"oracle agreement: {data['oracle_agreement']}",
    ]
    if result.transform != (0, 0, 0):
        lines.append(f"normalized by (r, s, t) = {result.transform}")
    if result.minimality_warning:
        lines.append("warning: v(delta) >= 12, model may not be minimal")
    if result.torsion_witness is not None:
        lines.append(f"torsion witness: {result.torsion_witness}")
    return data, "\n".join(lines)


def cmd_torsion(curve: WeierstrassCurve, args):
    result = classify(curve, strict=args.strict, run_oracle=False)
    work = result.curve
    if result.structure.value == "Zp":
        raise NoTorsionError(f"E0(Q_{curve.prime}) is Z_{curve.prime}; there is no p-torsion")
    z = torsion_root(work, args.precision, args.residue)
    point = psi_inverse(work, z, args.precision)
    data = {
        "p": curve.prime,
        "normalized_curve": work.to_dict()["a"],
        "transform": list(result.transform),
        "z": z.to_dict(),
        "point": point.to_dict(),
        "digits": args.precision,
    }
    text = f"z = {z}\nP = {point}  (on {work})"
    return data, text


def cmd_filtration(curve: WeierstrassCurve, args):
    if args.point is None:
        raise UsageError("filtration needs --point 'x,y' or 'O'")
    try:
        P = parse_point(args.point)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    level = filtration_level(curve, P)
    red = reduce_point(curve, P)
    data = {
        "p": curve.prime,
        "point": P.to_dict(),
        "level": level,
        "in_E0": red.in_E0,
        "in_E1": red.in_E1,
        "reduction": None if red.image is None else list(red.image),
    }
    if curve.is_normalized:
        z = psi(curve, P, args.precision)
        data["psi"] = z.to_dict()
        data["psi_valuation"] = z.valuation
    text = f"level: {'inf' if level == INF else level}"
    if "psi" in data:
        text += f"\npsi: {psi(curve, P, args.precision)}"
    return data, text


def cmd_series(args):
    degree = args.degree
    if args.generic or args.a is None:
        if args.a is not None or args.p is not None:
            raise UsageError("--generic does not take -p/-a")
        if args.at is not None:
            raise UsageError("--at needs a specialized curve (-p and -a)")
        ring = GENERIC
        curve = None
        degree = degree or 10
    else:
        curve = _curve_from(args)
        if args.at is not None:
            degree = degree or max(10, required_degree(args.precision))
        degree = degree or 10
        ring = CoefficientRing.specialized(curve.a, curve.prime, args.precision)
    if degree < 1:
        raise UsageError("degree must be >= 1")
    law = args.law
    if law == "w":
        series = compute_w(max(degree, 3), ring).truncate(degree)
    elif law == "F":
        series = compute_group_law(degree, ring).F
    elif law == "inv":
        series = compute_group_law(degree, ring).inv
    else:
        if args.n is None or args.n < 1:
            raise UsageError("--law mul needs --n >= 1")
        series = mul_by_n(args.n, degree, ring)
    data = series.to_json()
    data["law"] = law if law != "mul" else f"[{args.n}]"
    text = series.format()
    if args.at is not None:
        try:
            points = tuple(parse_rational(s) for s in args.at.split(","))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if len(points) != series.arity:
            raise UsageError(f"--at needs {series.arity} value(s)")
        value = specialize_and_eval(series, curve.a, points if len(points) > 1 else points[0], args.precision)
        data["value"] = value.to_dict()
        text += f"\nvalue: {value}"
    return data, text


def cmd_verify(args):
    rows = verify_paper_examples()
    data = {"rows": [r.to_dict() for r in rows], "all_passed": all(r.passed for r in rows)}
    return data, format_report(rows)


HANDLERS = {
    "classify": cmd_classify,
    "invariants": cmd_invariants,
    "normalize": cmd_normalize,
    "torsion": cmd_torsion,
    "filtration": cmd_filtration,
}

DEFAULT_FORMAT = {"series": "text", "verify-paper": "text"}


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="e0struct",
        description="Structure of E0(Q_p) for elliptic curves with additive reduction.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", help="the prime p")
    common.add_argument("-a", help="coefficients a1,a2,a3,a4,a6 (integers or a/b)")
    common.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="p-adic digits (default 12)")
    common.add_argument("--degree", type=int, help="series truncation degree")
    common.add_argument("--format", choices=("json", "text"), help="output format")
    common.add_argument("--strict", action="store_true", help="refuse to normalize the input model")
    common.add_argument("--batch", metavar="PATH", help="file with one curve per line")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in CURVE_COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "filtration":
            sp.add_argument("--point", help="'x,y' or 'O'")
        if name == "torsion":
            sp.add_argument("--residue", type=int, help="pick the torsion root with this residue mod p")
    sp = sub.add_parser("series", parents=[common])
    sp.add_argument("--law", choices=("w", "F", "inv", "mul"), required=True)
    sp.add_argument("--n", type=int, help="n for --law mul")
    sp.add_argument("--generic", action="store_true", help="coefficients in Z[a1,a2,a3,a4,a6]")
    sp.add_argument("--at", help="evaluate at z (or 'x,y' for F) modulo p^precision")
    sub.add_parser("verify-paper", parents=[common])
    return parser


def _render(data, text, fmt) -> str:
    return dumps(data) if fmt == "json" else text


def _run_one(args, curve_entry=None):
    """Returns (exit code, report, text) for one curve."""
    try:
        if curve_entry is None:
            curve = _curve_from(args)
        else:
            curve = compute_invariants(curve_entry[1], curve_entry[0])
        data, text = HANDLERS[args.command](curve, args)
        return EXIT_OK, data, text
    except UsageError as exc:
        return EXIT_USAGE, {"error": "MalformedInput", "message": str(exc)}, f"MalformedInput: {exc}"
    except E0Error as exc:
        return EXIT_DOMAIN, {"error": exc.code, "message": str(exc)}, f"{exc.code}: {exc}"


def _run_batch(args, out, err) -> int:
    try:
        with open(args.batch) as fh:
            lines = [ln for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    except OSError as exc:
        print(f"MalformedInput: {exc}", file=err)
        return EXIT_USAGE
    try:
        specs = [parse_curve_line(ln) for ln in lines]
    except UsageError as exc:
        print(f"MalformedInput: {exc}", file=err)
        return EXIT_USAGE
    with ThreadPoolExecutor() as pool:
        results = list(pool.map(lambda s: _run_one(args, s), specs))
    fmt = args.format or "json"
    if fmt == "json":
        print(dumps([r[1] for r in results]), file=out)
    else:
        for (p, a), (_, _, text) in zip(specs, results):
            print(f"# p={p} a={','.join(str(x) for x in a)}\n{text}", file=out)
    for code, data, _ in results:
        if code != EXIT_OK:
            print(f"{data['error']}: {data['message']}", file=err)
    return max(r[0] for r in results) if results else EXIT_OK


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.precision < 1:
        print("MalformedInput: precision must be >= 1", file=err)
        return EXIT_USAGE
    if args.degree is not None and args.degree < 1:
        print("MalformedInput: degree must be >= 1", file=err)
        return EXIT_USAGE
    fmt = args.format or DEFAULT_FORMAT.get(args.command, "json")

    if args.command in HANDLERS and args.batch:
        return _run_batch(args, out, err)
    if args.batch:
        print(f"MalformedInput: --batch is not supported by {args.command}", file=err)
        return EXIT_USAGE

    if args.command in HANDLERS:
        code, data, text = _run_one(args)
        if code != EXIT_OK:
            print(f"{data['error']}: {data['message']}", file=err)
            return code
        print(_render(data, text, fmt), file=out)
        return EXIT_OK
    try:
        data, text = cmd_series(args) if args.command == "series" else cmd_verify(args)
    except UsageError as exc:
        print(f"MalformedInput: {exc}", file=err)
        return EXIT_USAGE
    except E0Error as exc:
        print(f"{exc.code}: {exc}", file=err)
        return EXIT_DOMAIN
    print(_render(data, text, fmt), file=out)
    if args.command == "verify-paper" and not data["all_passed"]:
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
