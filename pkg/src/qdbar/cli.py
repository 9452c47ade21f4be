"""Command-line front end.

Exit codes: 0 certified (or success), 10 evidence of non-equivalence,
20 inconclusive, 1 usage or input error, 2 selftest failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import __version__
from .algebra import format_element, grade_decompose, parse_element
from .calculus import NoPreimage, dbar, integral
from .gauge import (EQUIVALENT, NOT_EQUIVALENT, SCHEMA_VERSION, GaugePair, SolveConfig,
                    _jsonable, decide_equivalence)
from .parsing import ParseError
from .podles import NotHomogeneous
from .representation import TruncationParams, op_norm, rep_matrix
from .scalars import SYMBOLIC, DomainError, ExactRing, FloatRing

EXIT_OK, EXIT_USAGE, EXIT_SELFTEST, EXIT_EVIDENCE, EXIT_INCONCLUSIVE = 0, 1, 2, 10, 20


class UsageError(Exception):
    pass


def _exact_sqrt(x: Fraction) -> Fraction | None:
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def ring_from_args(args, default_numeric: bool):
    """--r gives exact mode; --q is exact when it is the square of a rational."""
    if args.r is not None:
        r = Fraction(args.r)
        return ExactRing(r)
    if args.q is not None:
        try:
            qf = Fraction(args.q)
        except ValueError as exc:
            raise UsageError(f"cannot read q = {args.q!r}") from exc
        if not 0 < qf < 1:
            raise DomainError(f"q must lie in (0, 1), got {args.q}")
        r = _exact_sqrt(qf)
        return ExactRing(r) if r is not None else FloatRing.from_q(float(qf))
    return ExactRing(Fraction(1, 2)) if default_numeric else SYMBOLIC


def _trunc(args) -> TruncationParams:
    return TruncationParams(N=args.N, theta_grid=args.theta_grid, degree_cap=args.cap, tol=args.tol)


def run_config(args, ring) -> dict:
    return {"schema_version": SCHEMA_VERSION, "version": __version__, "ring": ring.describe(),
            "cap": args.cap, "N": args.N, "theta_grid": args.theta_grid, "tol": args.tol,
            "seed": args.seed}


def _emit(args, report: dict) -> None:
    text = json.dumps(_jsonable(report), sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")


def cmd_eval(args) -> int:
    ring = ring_from_args(args, False)
    x = parse_element(args.expr, ring)
    print(format_element(x))
    parts = grade_decompose(x)
    for n, part in parts.items():
        print(f"grade {n}: {format_element(part)}")
    _emit(args, {"config": run_config(args, ring), "input": args.expr, "normal_form": format_element(x),
                 "grades": {str(n): format_element(p) for n, p in parts.items()}})
    return EXIT_OK


def cmd_dbar(args) -> int:
    ring = ring_from_args(args, False)
    x = parse_element(args.expr, ring)
    y = dbar(x)
    print(format_element(y))
    _emit(args, {"config": run_config(args, ring), "input": args.expr, "dbar": format_element(y)})
    return EXIT_OK


def cmd_integral(args) -> int:
    ring = ring_from_args(args, False)
    x = parse_element(args.expr, ring)
    y = integral(x, args.cap)
    print(format_element(y))
    _emit(args, {"config": run_config(args, ring), "input": args.expr, "integral": format_element(y)})
    return EXIT_OK


def cmd_norm(args) -> int:
    ring = ring_from_args(args, True)
    x = parse_element(args.expr, ring)
    trunc = _trunc(args)
    est = op_norm(x, trunc)
    print(f"[{float(est.lower)!r}, {float(est.upper)!r}]")
    if args.csv:
        rep_matrix(x, 0.0, trunc).to_csv(args.csv)
    _emit(args, {"config": run_config(args, ring), "input": args.expr, "norm": est.to_dict()})
    return EXIT_OK


def cmd_decide(args) -> int:
    ring = ring_from_args(args, True)
    f, h = parse_element(args.f, ring), parse_element(args.h, ring)
    pair = GaugePair(f, h)
    if pair.is_scalar_difference:
        raise UsageError("h - f is a scalar: the two connections coincide, nothing to decide")
    cfg = SolveConfig(degree_cap=args.cap, tol_residual=args.tol, trunc=_trunc(args))
    report = decide_equivalence(pair, cfg)
    doc = report.to_dict()
    doc["run_config"] = run_config(args, ring)
    text = json.dumps(_jsonable(doc), sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    print(f"decision: {report.decision} ({report.grade})", file=sys.stderr)
    if report.decision == EQUIVALENT:
        return EXIT_OK
    if report.decision == NOT_EQUIVALENT:
        return EXIT_EVIDENCE
    return EXIT_INCONCLUSIVE


def cmd_selftest(args) -> int:
    from .acceptance import AcceptanceConfig, run_all

    cfg = AcceptanceConfig(seed=args.seed, tol=args.tol)
    results = run_all(cfg)
    for res in results:
        print(res.line())
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    _emit(args, {"config": {"seed": args.seed, "tol": args.tol, "schema_version": SCHEMA_VERSION},
                 "results": [{k: v for k, v in r.to_dict().items() if k != "seconds"} for r in results]})
    return EXIT_OK if passed == len(results) else EXIT_SELFTEST


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    grp = common.add_mutually_exclusive_group()
    grp.add_argument("--q", help="deformation parameter in (0,1); squares of rationals give exact mode")
    grp.add_argument("--r", help="rational square root of q (exact mode)")
    common.add_argument("--cap", type=int, default=12, help="word-length cap")
    common.add_argument("--N", type=int, default=64, help="Fock-space cutoff for norms")
    common.add_argument("--theta-grid", dest="theta_grid", type=int, default=16)
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--out", help="write a JSON report here")
    common.add_argument("--seed", type=int, default=2024)

    p = argparse.ArgumentParser(prog="qdbar", description="Holomorphic structures on the quantum projective line.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn, helptext in (("eval", cmd_eval, "normal form and grade decomposition"),
                               ("dbar", cmd_dbar, "apply dbar"),
                               ("integral", cmd_integral, "invert dbar on a grade -2 element"),
                               ("norm", cmd_norm, "certified C*-norm interval")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("expr")
        if name == "norm":
            sp.add_argument("--csv", help="export the truncated matrix at theta = 0")
        sp.set_defaults(func=fn)
    sp = sub.add_parser("decide", parents=[common], help="decide gauge equivalence of (f, h)")
    sp.add_argument("f")
    sp.add_argument("h")
    sp.set_defaults(func=cmd_decide)
    sp = sub.add_parser("selftest", parents=[common], help="run the acceptance criteria")
    sp.set_defaults(func=cmd_selftest)
    return p


def _protect_negative_expressions(argv: list[str]) -> list[str]:
    # "-q^(-2)*a*c" is an expression, not a flag; a leading space keeps argparse off it
    out = []
    for tok in argv:
        if tok.startswith("-") and not tok.startswith("--") and tok not in ("-h",):
            tok = " " + tok
        out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _protect_negative_expressions(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
    except (UsageError, NotHomogeneous, NoPreimage, DomainError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
