"""Batch command-line front end.

One subcommand per operation, one JSON document on stdout (CSV with --csv),
diagnostics on stderr. Exit codes: 0 success, 1 infeasible or no-solution
outcome, 2 usage or precondition error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from . import analytics, construct, search
from .errors import (
    BudgetExceeded,
    EgyfracError,
    InfeasibleAtScale,
    NotARepresentation,
    PreconditionViolated,
    ResidualNonzero,
)
from .reports import CSV_COLUMNS, CountReport
from .search import LjStatus, SearchBounds, Status

OK, INFEASIBLE, USAGE, BUDGET = 0, 1, 2, 3


def _rat(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else int(obj)
    if isinstance(obj, float):
        return float(f"{obj:.17g}")
    if isinstance(obj, CountReport):
        return obj.to_dict()
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _emit(doc: dict, as_csv: bool) -> None:
    doc = _jsonable(doc)
    if not as_csv:
        json.dump(doc, sys.stdout, indent=2)
        sys.stdout.write("\n")
        return
    writer = csv.writer(sys.stdout, lineterminator="\n")
    if set(CSV_COLUMNS) <= set(doc):
        writer.writerow(CSV_COLUMNS)
        writer.writerow(
            [json.dumps(doc[c]) if isinstance(doc[c], dict) else doc[c] for c in CSV_COLUMNS]
        )
        return
    writer.writerow(["key", "value"])
    for k, v in doc.items():
        writer.writerow([k, json.dumps(v) if isinstance(v, (dict, list)) else v])


def _diag(msg: str) -> None:
    print(msg, file=sys.stderr)


def _bounds(args) -> SearchBounds:
    return SearchBounds(
        max_denominator=args.max_den,
        max_terms=args.max_terms,
        node_budget=args.budget_nodes,
        time_budget=args.budget_seconds,
    )


def _search_exit(status: Status) -> int:
    if status == Status.FOUND:
        return OK
    if status == Status.EXHAUSTED:
        return INFEASIBLE
    return BUDGET


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="egyfrac", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--csv", action="store_true", help="CSV instead of JSON")
    common.add_argument("--budget-nodes", type=int, default=10**7)
    common.add_argument("--budget-seconds", type=float, default=60.0)
    common.add_argument("--max-den", type=int, default=1000)
    common.add_argument("--max-terms", type=int, default=64)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=None, help="reserved for sampled vectors")
    sub = top.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("represent", parents=[common], help="dense representation below x")
    p.add_argument("--r", type=_rat, default=Fraction(1))
    p.add_argument("--x", type=float, required=True)

    p = sub.add_parser("small", parents=[common], help="clear prime powers up to y")
    p.add_argument("--r", type=_rat, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--no-pad", action="store_true")

    p = sub.add_parser("mt", parents=[common], help="least max denominator at t terms")
    p.add_argument("--r", type=_rat, required=True)
    p.add_argument("--t", type=int, required=True)

    p = sub.add_parser("t0", parents=[common], help="least feasible term count")
    p.add_argument("--r", type=_rat, required=True)

    p = sub.add_parser("spread", parents=[common], help="tightest t-term representation")
    p.add_argument("--r", type=_rat, required=True)
    p.add_argument("--t", type=int, required=True)

    p = sub.add_parser("lj", parents=[common], help="rank-j membership at x")
    p.add_argument("--r", type=_rat, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--x", type=int, required=True)

    p = sub.add_parser("lj-slice", parents=[common], help="rank-j membership over a range")
    p.add_argument("--r", type=_rat, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--lo", type=int, required=True)
    p.add_argument("--hi", type=int, required=True)
    p.add_argument("--check-nesting", action="store_true")

    p = sub.add_parser("l1-count", parents=[common], help="first-rank proxy count")
    p.add_argument("--r", type=_rat, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--c", type=float, default=1.0)

    p = sub.add_parser("l1-member", parents=[common], help="exact first-rank membership")
    p.add_argument("--r", type=_rat, required=True)
    p.add_argument("--x", type=int, required=True)

    p = sub.add_parser("maxint", parents=[common], help="largest integer represented below x")
    p.add_argument("--x", type=int, required=True)

    p = sub.add_parser("kloosterman", parents=[common], help="inverse-pair point count")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--x", type=float, required=True)

    p = sub.add_parser("primesums", parents=[common], help="rough-part counts in a window")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--star", action="store_true", help="largest prime power instead of largest prime")

    p = sub.add_parser("smooth", parents=[common], help="smooth count in the half window")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--no-star", action="store_true")

    p = sub.add_parser("rho", parents=[common], help="smooth-density function")
    p.add_argument("--u", type=float, required=True)

    p = sub.add_parser("mertens", parents=[common], help="reciprocal prime sum over a band")
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--prime-powers", action="store_true")

    p = sub.add_parser("certify", parents=[common], help="per-prime optimality certificates")
    p.add_argument("--r", type=_rat, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--denominators", type=str, required=True, help="comma separated")

    p = sub.add_parser("findk", parents=[common], help="rough witness in a progression")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--smooth-bound", type=float, required=True)
    p.add_argument("--ceiling", type=int, default=None)

    p = sub.add_parser("enumerate", parents=[common], help="list representations of r")
    p.add_argument("--r", type=_rat, required=True)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--limit", type=int, default=100)
    return top


def _cmd_represent(args) -> int:
    rep, report = construct.dense_representation(args.r, args.x)
    _emit({"target": args.r, "denominators": list(rep.denominators), **report}, args.csv)
    return OK


def _cmd_small(args) -> int:
    try:
        rep, trace = construct.represent_small(args.r, args.y, pad=not args.no_pad)
    except ResidualNonzero as exc:
        _diag(f"small stage left residual {exc.value}")
        _emit(
            {
                "status": "residual-nonzero",
                "residual": exc.value,
                "trace": exc.trace.to_dict() if exc.trace else None,
            },
            args.csv,
        )
        return INFEASIBLE
    _emit(
        {
            "status": "ok",
            "target": args.r,
            "y": args.y,
            "size": len(rep.denominators),
            "max_denominator": max(rep.denominators),
            "denominators": list(rep.denominators),
            "trace": trace.to_dict(),
        },
        args.csv,
    )
    return OK


def _cmd_mt(args) -> int:
    out = search.m_t(args.r, args.t, _bounds(args))
    _emit(
        {
            "status": out.status.value,
            "m_t": out.value,
            "witness": list(out.witness.denominators) if out.witness else None,
            "nodes": out.nodes_explored,
        },
        args.csv,
    )
    return _search_exit(out.status)


def _cmd_t0(args) -> int:
    value = search.t_zero(args.r, _bounds(args))
    _emit({"t0": value}, args.csv)
    return OK


def _cmd_spread(args) -> int:
    out = search.m_prime_t(args.r, args.t, _bounds(args))
    doc = {
        "status": out.status.value,
        "witness": list(out.witness.denominators) if out.witness else None,
        "nodes": out.nodes_explored,
    }
    if out.witness:
        doc["m_prime_t"] = max(out.witness.denominators)
        doc["spread"] = max(out.witness.denominators) - min(out.witness.denominators)
    _emit(doc, args.csv)
    return _search_exit(out.status)


def _lj_exit(status: LjStatus) -> int:
    return BUDGET if status == LjStatus.UNKNOWN else OK


def _cmd_lj(args) -> int:
    out = search.lj_member(args.r, args.j, args.x, _bounds(args))
    _emit(
        {
            "status": out.status.value,
            "witness": list(out.witness.denominators) if out.witness else None,
            "nodes": out.nodes_explored,
        },
        args.csv,
    )
    return _lj_exit(out.status)


def _cmd_lj_slice(args) -> int:
    doc = search.lj_slice(
        args.r, args.j, args.lo, args.hi, _bounds(args), check_nesting=args.check_nesting
    )
    _emit(doc, args.csv)
    return BUDGET if doc["undecided"] else OK


def _cmd_l1_count(args) -> int:
    _emit(analytics.l1_proxy_count(args.r, args.x, C=args.c).to_dict(), args.csv)
    return OK


def _cmd_l1_member(args) -> int:
    out = analytics.l1_member_exact(args.r, args.x, _bounds(args))
    _emit(
        {
            "status": out.status.value,
            "witness": list(out.witness.denominators) if out.witness else None,
            "nodes": out.nodes_explored,
        },
        args.csv,
    )
    return _lj_exit(out.status)


def _cmd_maxint(args) -> int:
    out, comparison = search.max_int_rep(args.x, _bounds(args))
    _emit(
        {
            "status": out.status.value,
            "k": out.value,
            "witness": list(out.witness.denominators) if out.witness else None,
            "comparison": comparison,
            "nodes": out.nodes_explored,
        },
        args.csv,
    )
    return _search_exit(out.status)


def _cmd_kloosterman(args) -> int:
    _emit(analytics.kloosterman_pairs(args.k, args.x).to_dict(), args.csv)
    return OK


def _cmd_primesums(args) -> int:
    count, recip = analytics.primesums_report(
        args.alpha, args.x, args.y, star=args.star, threads=args.threads
    )
    _emit({"count": count.to_dict(), "reciprocal_sum": recip.to_dict()}, args.csv)
    return OK


def _cmd_smooth(args) -> int:
    _emit(
        analytics.smooth_count(
            args.alpha, args.x, args.eps, star=not args.no_star, threads=args.threads
        ).to_dict(),
        args.csv,
    )
    return OK


def _cmd_rho(args) -> int:
    _emit({"rho": analytics.dickman_rho(args.u)}, args.csv)
    return OK


def _cmd_mertens(args) -> int:
    _emit(analytics.mertens_sum(args.y, args.x, prime_powers=args.prime_powers).to_dict(), args.csv)
    return OK


def _cmd_certify(args) -> int:
    dens = [int(s) for s in args.denominators.split(",") if s.strip()]
    certs = analytics.bestposs_check(dens, args.x, args.r)
    _emit(
        {
            "certificates": [c.to_dict() for c in certs],
            "all_pass": all(c.verdict for c in certs),
        },
        args.csv,
    )
    return OK


def _cmd_findk(args) -> int:
    n = analytics.find_k_witness(args.k, args.smooth_bound, ceiling=args.ceiling)
    _emit({"witness": n}, args.csv)
    return OK if n is not None else INFEASIBLE


def _cmd_enumerate(args) -> int:
    bounds = _bounds(args)
    reps = []
    code = OK
    try:
        for rep in search.enumerate_reps(args.r, t=args.t, bounds=bounds):
            reps.append(list(rep.denominators))
            if len(reps) >= args.limit:
                break
    except BudgetExceeded as exc:
        _diag(str(exc))
        code = BUDGET
    _emit({"count": len(reps), "representations": reps, "truncated": code == BUDGET}, args.csv)
    return code


_DISPATCH = {
    "represent": _cmd_represent,
    "small": _cmd_small,
    "mt": _cmd_mt,
    "t0": _cmd_t0,
    "spread": _cmd_spread,
    "lj": _cmd_lj,
    "lj-slice": _cmd_lj_slice,
    "l1-count": _cmd_l1_count,
    "l1-member": _cmd_l1_member,
    "maxint": _cmd_maxint,
    "kloosterman": _cmd_kloosterman,
    "primesums": _cmd_primesums,
    "smooth": _cmd_smooth,
    "rho": _cmd_rho,
    "mertens": _cmd_mertens,
    "certify": _cmd_certify,
    "findk": _cmd_findk,
    "enumerate": _cmd_enumerate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.cmd](args)
    except (PreconditionViolated, NotARepresentation, ValueError) as exc:
        _diag(f"precondition: {exc}")
        return USAGE
    except BudgetExceeded as exc:
        _diag(f"budget: {exc}")
        return BUDGET
    except InfeasibleAtScale as exc:
        _diag(f"infeasible at this scale [{exc.stage}]: {exc.diagnostic}")
        return INFEASIBLE
    except EgyfracError as exc:
        _diag(f"no solution: {exc}")
        return INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
