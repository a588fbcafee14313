"""Command-line interface.

Subcommands: bound, arg-power, replay, optimize, compare-lmn.  Certificates
go to stdout (text or JSON); diagnostics go to stderr.  Exit status: 0 when
verified, 2 on precondition rejection, 3 on an indeterminate outcome, 1 on
parse or internal errors.  TWOLOG_PRECISION_BITS overrides the default
working precision.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import pipeline, serialize
from .algebraic import AlgebraicNumber, AmbiguousRootError, ParseTextError
from .engine import TwoLogInstance
from .numerics import DomainError, IndeterminateError, Precision
from .optimizer import NoCertifiedCandidateError, SearchConfig, optimize

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_PRECONDITION = 2
EXIT_INDETERMINATE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="twolog", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_root=True):
        p.add_argument("--minpoly", required=True,
                       help="integer coefficients, constant first, e.g. '5,-6,5'")
        if with_root:
            p.add_argument("--root", default=None, help="root hint 're,im', e.g. '0.6,0.8'")
        p.add_argument("--trusted-minpoly", action="store_true",
                       help="skip the irreducibility check (recorded in the certificate)")
        p.add_argument("--precision-bits", type=int,
                       default=int(os.environ.get("TWOLOG_PRECISION_BITS", "128")))
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--digits", type=int, default=15)

    p_bound = sub.add_parser("bound", help="certificate for b2 log(alpha) - b1 i pi/2")
    common(p_bound)
    p_bound.add_argument("--b1", type=int, required=True)
    p_bound.add_argument("--b2", type=int, required=True)

    p_arg = sub.add_parser("arg-power", help="certificate for |arg(alpha^n)|")
    common(p_arg)
    p_arg.add_argument("--n", type=int, required=True)

    p_replay = sub.add_parser("replay", help="re-derive the published inequality chain")
    p_replay.add_argument("--minpoly", default=None)
    p_replay.add_argument("--root", default=None)
    p_replay.add_argument("--trusted-minpoly", action="store_true")
    p_replay.add_argument("--b1", type=int, default=None)
    p_replay.add_argument("--b2", type=int, default=None)
    p_replay.add_argument("--paper-suite", action="store_true",
                          help="run the built-in grid of (D, h) regime points")
    p_replay.add_argument("--precision-bits", type=int,
                          default=int(os.environ.get("TWOLOG_PRECISION_BITS", "128")))
    p_replay.add_argument("--format", choices=("text", "json"), default="text")
    p_replay.add_argument("--digits", type=int, default=15)

    p_opt = sub.add_parser("optimize", help="grid search for a sharper certified bound")
    common(p_opt)
    p_opt.add_argument("--b1", type=int, required=True)
    p_opt.add_argument("--b2", type=int, required=True)
    p_opt.add_argument("--rho", action="append", default=None,
                       help="candidate rho (exact decimal); repeatable")
    p_opt.add_argument("--mu", action="append", default=None,
                       help="candidate mu (exact decimal); repeatable")
    p_opt.add_argument("--L-min", type=int, default=None)
    p_opt.add_argument("--L-max", type=int, default=None)
    p_opt.add_argument("--R1", action="append", type=int, default=None)
    p_opt.add_argument("--max-candidates", type=int, default=512)

    p_cmp = sub.add_parser("compare-lmn",
                           help="certified bound next to the earlier published formula")
    common(p_cmp)
    p_cmp.add_argument("--b1", type=int, required=True)
    p_cmp.add_argument("--b2", type=int, required=True)

    return parser


def _alpha_from_args(args) -> AlgebraicNumber:
    return AlgebraicNumber.from_texts(args.minpoly, args.root,
                                      trusted=args.trusted_minpoly)


def _emit(args, record: dict) -> None:
    if args.format == "json":
        sys.stdout.write(serialize.render_json(record))
    else:
        sys.stdout.write(serialize.render_text(record))


def _cmd_bound(args) -> int:
    alpha = _alpha_from_args(args)
    cert = pipeline.certified_bound(alpha, args.b1, args.b2, Precision(args.precision_bits))
    record = serialize.certificate_record(cert, args.digits)
    if args.trusted_minpoly:
        record["assumption_trail"].append("minimal polynomial trusted without factorization")
    _emit(args, record)
    return EXIT_OK


def _cmd_arg_power(args) -> int:
    alpha = _alpha_from_args(args)
    cert = pipeline.arg_power_bound(alpha, args.n, Precision(args.precision_bits))
    record = serialize.certificate_record(cert, args.digits)
    record["kind"] = "arg-power-certificate"
    record["n"] = args.n
    if args.trusted_minpoly:
        record["assumption_trail"].append("minimal polynomial trusted without factorization")
    _emit(args, record)
    return EXIT_OK


def _cmd_replay(args) -> int:
    prec = Precision(args.precision_bits)
    if args.paper_suite:
        records = []
        all_ok = True
        for D, h in pipeline.PAPER_SUITE_GRID:
            report = pipeline.replay_regime_point(D, h, prec)
            records.append(serialize.replay_record(report, args.digits, label=f"D={D},h={h}"))
            all_ok = all_ok and report.ok
        _emit(args, {"schema": serialize.SCHEMA_VERSION, "kind": "replay-suite",
                     "points": records, "ok": all_ok})
        return EXIT_OK if all_ok else EXIT_INDETERMINATE
    if args.minpoly is None or args.b1 is None or args.b2 is None:
        raise UsageError("replay needs --minpoly/--b1/--b2 or --paper-suite")
    alpha = AlgebraicNumber.from_texts(args.minpoly, args.root,
                                       trusted=args.trusted_minpoly)
    inputs = pipeline.compute_inputs(alpha, args.b1, args.b2, prec)
    scalars = inputs.scalars(prec)
    state = pipeline.build_parameters(inputs, prec)
    from .engine import derive_quantities
    inst = TwoLogInstance.quarter_turn(alpha, inputs.b1, inputs.b2)
    dq = derive_quantities(state.engine_params(), inst, prec)
    report = pipeline.replay_inequalities(state, inputs.D, scalars.h, scalars.log_bprime,
                                          scalars.a, dq=dq, h_branch=scalars.h_branch,
                                          prec=prec)
    _emit(args, serialize.replay_record(report, args.digits,
                                        label=f"instance b1={args.b1}, b2={args.b2}"))
    return EXIT_OK if report.ok else EXIT_INDETERMINATE


def _cmd_optimize(args) -> int:
    alpha = _alpha_from_args(args)
    prec = Precision(args.precision_bits)
    inputs = pipeline.compute_inputs(alpha, args.b1, args.b2, prec)
    inst = TwoLogInstance.quarter_turn(alpha, inputs.b1, inputs.b2)
    if args.L_min is None or args.L_max is None:
        state = pipeline.build_parameters(inputs, prec)
        l_lo = args.L_min if args.L_min is not None else max(2, state.L - 2)
        l_hi = args.L_max if args.L_max is not None else state.L + 2
    else:
        l_lo, l_hi = args.L_min, args.L_max
    cfg = SearchConfig(
        rho_grid=tuple(Fraction(r) for r in (args.rho or [str(pipeline.RHO)])),
        mu_grid=tuple(Fraction(m) for m in (args.mu or [str(pipeline.MU)])),
        L_range=(l_lo, l_hi),
        R1_range=(min(args.R1), max(args.R1)) if args.R1 else (4, 4),
        max_candidates=args.max_candidates,
        precision=prec,
    )
    cert = optimize(inst, cfg)
    _emit(args, serialize.optimizer_record(cert, args.digits))
    return EXIT_OK


def _cmd_compare(args) -> int:
    alpha = _alpha_from_args(args)
    prec = Precision(args.precision_bits)
    cert = pipeline.certified_bound(alpha, args.b1, args.b2, prec)
    baseline = pipeline.baseline_comparison(alpha, args.b1, args.b2, prec)
    record = serialize.comparison_record(
        serialize.certificate_record(cert, args.digits), baseline, args.digits)
    _emit(args, record)
    return EXIT_OK


_COMMANDS = {
    "bound": _cmd_bound,
    "arg-power": _cmd_arg_power,
    "replay": _cmd_replay,
    "optimize": _cmd_optimize,
    "compare-lmn": _cmd_compare,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ParseTextError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except AmbiguousRootError as exc:
        print(f"root selection rejected: {exc}", file=sys.stderr)
        for cand in exc.candidates:
            print(f"  candidate root near ({cand[0]}, {cand[1]})", file=sys.stderr)
        return EXIT_PRECONDITION
    except pipeline.PreconditionError as exc:
        print(f"precondition rejected: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except pipeline.VerificationUnresolved as exc:
        print(f"verification unresolved: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE
    except (IndeterminateError, NoCertifiedCandidateError) as exc:
        print(f"indeterminate: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE
    except DomainError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports and exits
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
