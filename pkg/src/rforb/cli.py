"""``rforb`` command line.

Row indices on the command line and in JSON output are 1-based.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import analysis, constructions, formulas, verify as verify_mod
from .containment import witness
from .matrix import (
    MatrixError,
    RMatrix,
    TwoRowSpec,
    build_block,
    build_F,
    build_identity,
    build_Kk,
    build_Kks,
    format_matrix,
    multiply,
    read_matrix,
)
from .solver import SearchBudget, SearchIncomplete, forb_exact, lower_bound_greedy


def parse_pattern(text: str) -> RMatrix:
    """Named pattern (``K2``, ``I3``, ``Kks:3,1``, ``block:1,1``, ``F:0,1,2,0``,
    optionally prefixed ``3*``) or a path to a matrix file."""
    p = 1
    if "*" in text and not os.path.exists(text):
        head, text = text.split("*", 1)
        p = int(head)
    if os.path.exists(text):
        F = read_matrix(text)
    else:
        name, _, args = text.partition(":")
        nums = [int(x) for x in args.split(",")] if args else []
        if name.startswith("K") and name[1:].isdigit():
            F = build_Kk(int(name[1:]))
        elif name.startswith("I") and name[1:].isdigit():
            F = build_identity(int(name[1:]))
        elif name == "Kks" and len(nums) == 2:
            F = build_Kks(*nums)
        elif name == "block" and len(nums) in (2, 3):
            F = build_block(*nums)
        elif name == "F" and len(nums) == 4:
            F = build_F(nums)
        else:
            raise MatrixError(f"unrecognised pattern {text!r}")
    return multiply(p, F) if p > 1 else F


def _emit(obj, out=None) -> None:
    text = obj if isinstance(obj, str) else json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _budget(args) -> SearchBudget:
    base = SearchBudget.from_env()
    return SearchBudget(
        nodes=args.budget_nodes if args.budget_nodes is not None else base.nodes,
        seconds=args.budget_secs if args.budget_secs is not None else base.seconds,
    )


def _kv(items) -> dict:
    out = {}
    for item in items:
        key, eq, val = item.partition("=")
        if not eq:
            raise MatrixError(f"expected key=value, got {item!r}")
        out[key] = int(val)
    return out


# -- subcommands --------------------------------------------------------------


_CONSTRUCT_INTS = ("m", "r", "k", "s", "p", "a", "b", "seed")


def cmd_construct(args) -> int:
    f = args.family or args.family_opt
    if f is None:
        raise MatrixError("construct needs a family")
    for key, val in _kv(args.params).items():
        if key not in _CONSTRUCT_INTS:
            raise MatrixError(f"unknown construct parameter {key!r}")
        setattr(args, key, val)
    if args.m is None:
        raise MatrixError("construct needs m (--m or --params m=...)")
    if f == "kk":
        A = constructions.construct_Kk_avoider(args.m, args.r, args.k, args.p)
    elif f == "kks":
        A = constructions.construct_Kks_avoider(args.m, args.r, args.k, args.s, args.p)
    elif f == "ternary-pkks":
        A = constructions.construct_ternary_pKks(args.m, args.k, args.s, args.p)
    elif f == "i2":
        A = constructions.construct_I2_extremal(args.m, args.r)
    elif f == "3i2":
        A = constructions.construct_3I2_ternary(args.m)
    elif f == "block":
        A = constructions.construct_block_avoider(args.m, args.r, args.a, args.b, args.p)
    elif f == "3row":
        A = constructions.construct_3row(args.m, args.r, args.variant)
    elif f == "lift":
        seq = constructions.named_sequence(args.sequence, k=args.k, s=args.s)
        A = constructions.lift_binary_sequence(args.m, args.r, seq)
    elif f == "greedy":
        A = lower_bound_greedy(args.m, args.r, parse_pattern(args.pattern), args.order, args.seed)
    else:  # pragma: no cover - argparse restricts choices
        raise MatrixError(f"unknown family {f}")
    _emit(format_matrix(A), args.out)
    return 0


def cmd_forb(args) -> int:
    if args.formula:
        fv = formulas.evaluate(args.formula, **_kv(args.params))
        _emit({"family": args.formula, **fv.to_json()}, args.out)
        return 0
    if args.m is None or args.r is None or args.pattern is None:
        raise MatrixError("--exact needs --m, --r and --pattern")
    rep = forb_exact(
        args.m, args.r, parse_pattern(args.pattern), _budget(args),
        backend=args.backend, formula_bounds=not args.no_formula_bounds,
    )
    _emit(rep.to_json(), args.out)
    return 0 if rep.exhausted else 3


def cmd_check(args) -> int:
    A = read_matrix(args.target)
    F = parse_pattern(args.pattern)
    w = witness(A, F)
    _emit({"contains": w is not None, "witness": w.to_json() if w else None}, args.out)
    return 0 if w is not None else 1


def cmd_verify(args) -> int:
    grid = verify_mod.QUICK_GRID if args.quick else verify_mod.Grid()
    report = verify_mod.verify(grid, args.mode, jobs=args.jobs, budget=_budget(args))
    _emit(report, args.out)
    if args.out:
        s = report["summary"]
        print(f"{s['cells']} cells, {s['skipped']} skipped, {s['hard_failures']} hard failures", file=sys.stderr)
    return 0 if report["ok"] else 1


def cmd_reduce(args) -> int:
    A = read_matrix(args.matrix)
    spec = TwoRowSpec.parse(args.spec)
    if args.mode == "ternary":
        pair = tuple(x - 1 for x in args.pair) if args.pair else None
        B = analysis.normalize_ternary(A, spec, pair)
    else:
        B = analysis.reduce_r_gt_3(A, spec, args.r)
    _emit(format_matrix(B), args.out)
    return 0


def cmd_tournament(args) -> int:
    T = analysis.tournament_of(read_matrix(args.matrix))
    _emit(T.to_json(), args.out)
    return 0


def cmd_marks(args) -> int:
    A = read_matrix(args.matrix)
    if args.mode == "blocks":
        if args.a is None or args.b is None:
            raise MatrixError("--mode blocks needs --a and --b")
        table = analysis.mark_blocks(A, args.a, args.b)
    else:
        if args.baseline:
            B = read_matrix(args.baseline)
        else:
            B, _ = analysis.split_rare_patterns(A, args.cap)
        table = analysis.mark_pairs_I2(A, B)
    _emit(table.to_json(), args.out)
    return 0


# -- parser -------------------------------------------------------------------


def _add_budget(p):
    p.add_argument("--budget-nodes", type=int, help="node limit (default: $RFORB_BUDGET_NODES or 1e8)")
    p.add_argument("--budget-secs", type=float, help="time limit (default: $RFORB_BUDGET_SECS or 300)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rforb", description="Forbidden configurations in r-matrices.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="print an extremal construction as a matrix file")
    families = ["kk", "kks", "ternary-pkks", "i2", "3i2", "block", "3row", "lift", "greedy"]
    p.add_argument("family", nargs="?", choices=families)
    p.add_argument("--family", dest="family_opt", choices=families)
    p.add_argument("--params", nargs="*", default=[], metavar="KEY=VALUE", help="alternative to the flags below")
    p.add_argument("--m", type=int)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--b", type=int, default=1)
    p.add_argument("--variant", choices=sorted(constructions.THREE_ROW_VARIANTS), default="zero-identity-one")
    p.add_argument("--sequence", default="zero-identity-one",
                   choices=["zero-identity-one", "triangular-union", "i2", "complete", "complete-uniform"],
                   help="binary sequence for the lift family")
    p.add_argument("--pattern", default="K2", help="pattern for the greedy family")
    p.add_argument("--order", choices=["lexicographic", "by-zero-count", "random"], default="lexicographic")
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("forb", help="closed-form value or exact search")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--formula", metavar="FAMILY", choices=sorted(formulas.FAMILIES))
    g.add_argument("--exact", action="store_true")
    p.add_argument("params", nargs="*", help="key=value formula parameters")
    p.add_argument("--m", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--pattern")
    p.add_argument("--backend", choices=["cython", "python"])
    p.add_argument("--no-formula-bounds", action="store_true", help="do not stop early at formula upper bounds")
    _add_budget(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_forb)

    p = sub.add_parser("check", help="containment test; exit 0 if found, 1 if avoided")
    p.add_argument("--target", "--matrix", dest="target", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify", help="run verification grids and write a JSON report")
    p.add_argument("--mode", choices=verify_mod.MODES, default="all")
    p.add_argument("--quick", action="store_true", help="small grid")
    p.add_argument("--jobs", type=int, default=1)
    _add_budget(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reduce", help="rewrite a two-rowed avoider")
    p.add_argument("--matrix", required=True)
    p.add_argument("--spec", required=True, help="a,b,c,d")
    p.add_argument("--r", type=int)
    p.add_argument("--mode", choices=["r-gt-3", "ternary"], default="r-gt-3")
    p.add_argument("--pair", type=int, nargs=2, metavar=("I", "J"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("tournament", help="tournament of an I_2-avoider")
    p.add_argument("--matrix", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_tournament)

    p = sub.add_parser("marks", help="mark tables")
    p.add_argument("--matrix", required=True)
    p.add_argument("--mode", choices=["pairs", "blocks"], default="pairs")
    p.add_argument("--baseline", help="I_2-avoiding part; default splits off rare pair patterns")
    p.add_argument("--cap", type=int, default=2)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_marks)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"rforb: error: {exc}", file=sys.stderr)
        return 2
    except SearchIncomplete as exc:
        print(f"rforb: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
