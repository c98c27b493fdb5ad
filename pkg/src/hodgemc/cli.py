"""Command-line interface: ``hodgemc {mc,twist,check,reduce,hypergeom,verify}``.

Exit codes: 0 success, 1 the check or verification found problems, 2 usage
or input errors, 3 a computation failed.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import io
from .errors import HodgeError, ParseError
from .invariants import (
    anchor_p,
    as_angle,
    check_rank_consistency,
    euler_h1_dimension,
    gamma_p,
    h1_affine_map,
    h1_min_map,
)
from .katz import hypergeometric, reduce, rigidity_index
from .transforms import TwistParameter, middle_convolve, twist

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_ERROR = 0, 1, 2, 3


class _Usage(Exception):
    pass


def _read(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None
    return io.parse(text)


def _angle_arg(text: str):
    try:
        return as_angle(text)
    except HodgeError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _angle_list(text: str):
    return [_angle_arg(t) for t in text.split(",") if t.strip()]


def _twist_arg(text: str):
    loc, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected LOCATION=a/b, got {text!r}")
    return loc.strip(), _angle_arg(value)


def _maybe_anchor(data, args):
    anchor = args.anchor_p
    if anchor is None:
        anchor = args.out is None and sys.stdout.isatty()
    return anchor_p(data) if anchor else data


# --------------------------------------------------------------------------
# commands


def cmd_mc(args):
    data = middle_convolve(_read(args.input), args.gamma0)
    return EXIT_OK, io.serialize(_maybe_anchor(data, args))


def cmd_twist(args):
    exponents = {}
    for loc, e in args.at or []:
        if loc in exponents:
            raise _Usage(f"location {loc} given twice")
        exponents[loc] = e
    data = twist(_read(args.input), TwistParameter(exponents))
    return EXIT_OK, io.serialize(_maybe_anchor(data, args))


def check_report(data) -> dict:
    report = {"rank": data.rank, "rigidity_index": rigidity_index(data)}
    violations = check_rank_consistency(data)
    report["rank_violations"] = [
        {"point": str(v.point), "p": v.p, "expected": v.expected, "found": v.found} for v in violations
    ]
    problems = len(violations)
    report["euler_h1"] = euler_h1_dimension(data)
    if data.delta_valid and not violations:
        try:
            aff, mn = h1_affine_map(data), h1_min_map(data)
        except HodgeError as exc:
            report["invariant_error"] = str(exc)
            problems += 1
        else:
            report["gamma"] = {str(p): gamma_p(data, p) for p in data.p_window() if gamma_p(data, p)}
            report["h1_affine"] = {str(p): v for p, v in sorted(aff.items())}
            report["h1_min"] = {str(p): v for p, v in sorted(mn.items())}
            if sum(aff.values()) != report["euler_h1"]:
                report["euler_mismatch"] = True
                problems += 1
    report["clean"] = problems == 0
    return report


def cmd_check(args):
    report = check_report(_read(args.input))
    return (EXIT_OK if report["clean"] else EXIT_FAILED), io.dumps(report)


def cmd_reduce(args):
    chain = reduce(_read(args.input))
    return EXIT_OK, io.dumps(io.chain_to_json(chain))


def cmd_hypergeom(args):
    data = hypergeometric(args.alpha, args.beta)
    return EXIT_OK, io.serialize(data)


def cmd_verify(args):
    from .oracle.verify import verify

    report = verify(_read(args.input), seed=args.seed, max_order=args.max_order)
    return (EXIT_OK if report["ok"] else EXIT_FAILED), io.dumps(report)


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hodgemc",
        description="Hodge numerical invariants under middle convolution.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def with_output(p, anchor=True):
        p.add_argument("--out", help="write the document here instead of stdout")
        if anchor:
            g = p.add_mutually_exclusive_group()
            g.add_argument("--anchor-p", dest="anchor_p", action="store_true", default=None,
                           help="shift so that the lowest Hodge index is 0 (default on a terminal)")
            g.add_argument("--no-anchor-p", dest="anchor_p", action="store_false")

    p = sub.add_parser("mc", help="middle convolution with a Kummer module")
    p.add_argument("--gamma0", required=True, type=_angle_arg, help="angle a/b of lambda0")
    p.add_argument("input", help="data document, or - for stdin")
    with_output(p)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("twist", help="tensor with a rank-one local system")
    p.add_argument("--at", action="append", type=_twist_arg, metavar="LOC=a/b",
                   help="exponent at a finite point (repeatable)")
    p.add_argument("input")
    with_output(p)
    p.set_defaults(func=cmd_twist)

    p = sub.add_parser("check", help="rank consistency and derived invariants")
    p.add_argument("input")
    with_output(p, anchor=False)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("reduce", help="Katz reduction to rank one")
    p.add_argument("input")
    with_output(p, anchor=False)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("hypergeom", help="data of a hypergeometric system")
    p.add_argument("--alpha", required=True, type=_angle_list, help="comma separated angles at infinity")
    p.add_argument("--beta", required=True, type=_angle_list, help="comma separated angles, negated at 0")
    with_output(p, anchor=False)
    p.set_defaults(func=cmd_hypergeom)

    p = sub.add_parser("verify", help="replay the reduction through the monodromy oracle")
    p.add_argument("input")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-order", type=int, default=None, help="cap on the cyclotomic order")
    with_output(p, anchor=False)
    p.set_defaults(func=cmd_verify)
    return parser


def _diagnostic(kind: str, exc) -> str:
    out = {"error": kind, "message": str(exc)}
    if isinstance(exc, ParseError):
        if exc.line is not None:
            out["line"] = exc.line
        if exc.field is not None:
            out["field"] = exc.field
    return json.dumps(out, sort_keys=True)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, text = args.func(args)
    except _Usage as exc:
        print(_diagnostic("usage", exc), file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(_diagnostic("ParseError", exc), file=sys.stderr)
        return EXIT_USAGE
    except HodgeError as exc:
        print(_diagnostic(type(exc).__name__, exc), file=sys.stderr)
        return EXIT_ERROR
    if args.out:
        io.write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
