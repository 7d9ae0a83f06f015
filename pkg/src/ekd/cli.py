"""Command-line entry point.

Exit codes: 0 pass, 1 a check certified false, 2 bad input,
3 a required comparison hit the precision cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import intervals as ivl
from .bounds import bounds_profile, bounds_table
from .errors import CertificationError, ConsistencyError, EkdError, InputError
from .irreducible import Irreducibility, test_irreducible
from .polynomial import IntPolynomial, parse_polynomial
from .polytope import (ekd_half_spaces, vertices_brute_force, vertices_by_elimination,
                       vertices_closed_form)
from .roots import DEFAULT_BITS, PRECISION_CAP, modulus_profile
from .scan import Check, ScanConfig, records_to_csv, records_to_json, run_scan, tightness_report
from .verify import check_membership_witness, margin_identity_check, modulus_separation, unit_gap_property

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


def parse_range(text: str) -> tuple[int, ...]:
    """'3..40', '3,5,8', '-40..-3,3..40' or a single integer."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            a, b = part.split("..", 1)
            lo, hi = int(a), int(b)
            if lo > hi:
                raise argparse.ArgumentTypeError(f"empty range {part}")
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return tuple(sorted(set(out)))


def parse_point(text: str) -> tuple[Fraction, ...]:
    return tuple(Fraction(s.strip()) for s in text.split(",") if s.strip())


def _checks(text: str) -> frozenset[Check]:
    try:
        return frozenset(Check[s.strip().upper()] for s in text.split(",") if s.strip())
    except KeyError as exc:
        raise argparse.ArgumentTypeError(f"unknown check {exc}") from None


def _cap(text: str) -> int:
    v = int(text)
    if not 53 <= v <= 4096:
        raise argparse.ArgumentTypeError("precision cap must lie in [53, 4096]")
    return v


def read_config(path: str) -> dict[str, str]:
    """key = value lines; '#' starts a comment. Keys use the long flag names."""
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


GLOBAL_FLAGS = ("precision_cap", "jobs", "format", "output", "config")


def _common(top: bool) -> argparse.ArgumentParser:
    # Subcommands repeat the global flags so they may follow the subcommand
    # name; their defaults are suppressed so they never clobber values that
    # were given before it.
    def default(v):
        return v if top else argparse.SUPPRESS

    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--precision-cap", type=_cap, default=default(PRECISION_CAP))
    p.add_argument("--jobs", type=int, default=default(1))
    p.add_argument("--format", choices=["json", "csv"], default=default("json"))
    p.add_argument("--output", default=default(None))
    p.add_argument("--config", default=default(None))
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common(top=False)
    parser = argparse.ArgumentParser(prog="ekd", parents=[_common(top=True)],
                                     description="Vertices of E_{k,d} and certified checks on conjugate moduli.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("vertices", parents=[common], help="closed-form vertices of E_{k,d}")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--cross-check", action="store_true", help="compare against elimination and brute force")

    p = sub.add_parser("member", parents=[common], help="evaluate |a0| prod |ai|^ci against 1")
    p.add_argument("--poly", required=True)
    p.add_argument("--point", required=True, type=parse_point, help="comma-separated rationals, e.g. 4,0 or 0,3/2")
    p.add_argument("--bits", type=int, default=DEFAULT_BITS)

    p = sub.add_parser("verify", parents=[common], help="unit gap and margin identity for one polynomial")
    p.add_argument("--poly", required=True)
    p.add_argument("--bits", type=int, default=DEFAULT_BITS)

    p = sub.add_parser("scan", parents=[common], help="run checks over trinomials x^d - h x^j + 1")
    p.add_argument("--d", dest="d_range", type=parse_range, required=False)
    p.add_argument("--j", dest="j_rule", default="all", help="'all', 'last' (j = d-1) or a range")
    p.add_argument("--h", dest="h_range", type=parse_range, required=False)
    p.add_argument("--k", dest="k_range", type=parse_range)
    p.add_argument("--checks", type=_checks, default=frozenset({Check.ANNULI}))
    p.add_argument("--timing", action="store_true", help="include per-record seconds (breaks byte determinism)")

    p = sub.add_parser("tightness", parents=[common], help="x^{3k} - x^k - 1 at the vertex (0,...,0,2)")
    p.add_argument("--kmax", type=int, default=3)
    p.add_argument("--bits", type=int, default=256)

    p = sub.add_parser("bounds", parents=[common], help="mu, E and the predicted exponent")
    p.add_argument("-d", type=int)
    p.add_argument("-k", type=int)
    p.add_argument("--table", type=int, metavar="DMAX")

    p = sub.add_parser("separation", parents=[common], help="smallest gap between distinct moduli")
    p.add_argument("--poly", required=True)
    p.add_argument("--bits", type=int, default=DEFAULT_BITS)

    p = sub.add_parser("irreducible", parents=[common], help="certify irreducibility")
    p.add_argument("--poly", required=True)
    p.add_argument("--bits", type=int, default=DEFAULT_BITS)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    values = read_config(known.config)
    converters = {"precision_cap": _cap, "jobs": int, "d_range": parse_range, "h_range": parse_range,
                  "k_range": parse_range, "checks": _checks, "kmax": int, "bits": int}
    aliases = {"d": "d_range", "h": "h_range", "j": "j_rule", "k": "k_range"}
    parsed = {}
    for key, value in values.items():
        key = aliases.get(key, key)
        parsed[key] = converters.get(key, str)(value)
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    parser.set_defaults(**{k: v for k, v in parsed.items() if k in GLOBAL_FLAGS})
    local = {k: v for k, v in parsed.items() if k not in GLOBAL_FLAGS}
    for p in sub.choices.values():
        p.set_defaults(**local)


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def _poly(text: str) -> IntPolynomial:
    return parse_polynomial(text)


def cmd_vertices(args) -> int:
    vs = vertices_closed_form(args.k, args.d)
    if args.cross_check:
        system = ekd_half_spaces(args.k, args.d)
        if not (vs == vertices_by_elimination(system) == vertices_brute_force(system)):
            raise ConsistencyError("vertex enumerations disagree")
    _emit(args, vs.to_csv() if args.format == "csv" else vs.to_json() + "\n")
    return EXIT_OK


def cmd_member(args) -> int:
    p = _poly(args.poly)
    rep = check_membership_witness(p, args.point, bits=min(args.bits, args.precision_cap), cap=args.precision_cap)
    _emit(args, _dump(rep.to_json()))
    return EXIT_OK


def cmd_verify(args) -> int:
    p = _poly(args.poly)
    bits = min(args.bits, args.precision_cap)
    out = {"poly": str(p), "unitGap": unit_gap_property(p, bits=bits, cap=args.precision_cap).to_json()}
    identities = [margin_identity_check(p, n, [n], bits=bits, cap=args.precision_cap)
                  for n in range(1, p.degree - 1)]
    out["marginIdentity"] = [r.to_json() for r in identities]
    _emit(args, _dump(out))
    ok = out["unitGap"]["holds"] and all(r.holds for r in identities)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_scan(args) -> int:
    if args.d_range is None or args.h_range is None:
        raise InputError("scan needs --d and --h (on the command line or in the config)")
    j_rule = args.j_rule
    if j_rule not in ("all", "last"):
        j_rule = parse_range(j_rule)
    cfg = ScanConfig(d_range=args.d_range, h_range=args.h_range, j_rule=j_rule, k_range=args.k_range,
                     checks=args.checks, precision_cap=args.precision_cap, timing=args.timing)
    records = run_scan(cfg, jobs=args.jobs)
    text = records_to_csv(records, cfg.checks) if args.format == "csv" else records_to_json(records)
    _emit(args, text)
    return EXIT_FAIL if any(r.failed for r in records) else EXIT_OK


def cmd_tightness(args) -> int:
    if not 1 <= args.kmax <= 4:
        raise InputError("kmax must be between 1 and 4")
    rows = [tightness_report(k, args.bits) for k in range(1, args.kmax + 1)]
    _emit(args, _dump(rows))
    return EXIT_FAIL if any(r["status"] == "FAIL" for r in rows) else EXIT_OK


def cmd_bounds(args) -> int:
    if args.table is not None:
        rows = [b.to_json() | {"exceptional": b.exceptional} for b in bounds_table(args.table)]
        if args.format == "csv":
            head = ["d", "k", "mu", "calE", "branch", "predictedExponent", "exceptional"]
            text = ",".join(head) + "\n" + "".join(",".join(str(r[h]) for h in head) + "\n" for r in rows)
            _emit(args, text)
        else:
            _emit(args, _dump(rows))
        return EXIT_OK
    if args.d is None or args.k is None:
        raise InputError("bounds needs -d and -k, or --table")
    _emit(args, _dump(bounds_profile(args.d, args.k).to_json()))
    return EXIT_OK


def cmd_separation(args) -> int:
    p = _poly(args.poly)
    rep = modulus_separation(modulus_profile(p, min(args.bits, args.precision_cap), args.precision_cap))
    _emit(args, _dump(rep.to_json()))
    return EXIT_OK if ivl.lo(rep.min_gap) > 0 else EXIT_FAIL


def cmd_irreducible(args) -> int:
    p = _poly(args.poly)
    v = test_irreducible(p, bits=min(args.bits, args.precision_cap), cap=args.precision_cap)
    _emit(args, _dump(v.to_json() | {"poly": str(p)}))
    return EXIT_CAP if v.status is Irreducibility.UNKNOWN else EXIT_OK


COMMANDS = {
    "vertices": cmd_vertices,
    "member": cmd_member,
    "verify": cmd_verify,
    "scan": cmd_scan,
    "tightness": cmd_tightness,
    "bounds": cmd_bounds,
    "separation": cmd_separation,
    "irreducible": cmd_irreducible,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except (EkdError, OSError, ValueError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except CertificationError as exc:
        print(f"precision cap reached: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ConsistencyError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (EkdError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
