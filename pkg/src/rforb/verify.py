"""Verification campaigns cross-checking formulas, constructions and the exact solver."""
from __future__ import annotations

import datetime as _dt
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from . import __version__
from . import formulas as fm
from .analysis import is_transitive, stability_bound, tournament_of
from .constructions import (
    F_OPEN_3x2,
    HypothesisError,
    THREE_ROW_VARIANTS,
    construct_3I2_ternary,
    construct_3row,
    construct_block_avoider,
    construct_I2_extremal,
    construct_Kk_avoider,
    construct_Kks_avoider,
    construct_ternary_pKks,
    lift_size,
    targets,
    ternary_pKks_size,
)
from .containment import contains
from .matrix import RMatrix, build_block, build_F, build_identity, build_Kk, multiply
from .solver import SearchBudget, enumerate_maximal, forb_exact

SCHEMA_VERSION = "1.0"
MODES = ("formula-vs-construction", "formula-vs-solver", "all")


class GridTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    ms: tuple[int, ...] = (1, 2, 3, 4, 5, 6)
    rs: tuple[int, ...] = (2, 3, 4, 5)
    ks: tuple[int, ...] = (1, 2, 3)
    ps: tuple[int, ...] = (1, 2, 3)
    families: tuple[str, ...] = ("kk", "kks", "ternary-pkks", "i2", "3i2", "block", "3row")
    solver_points: tuple[tuple[int, int], ...] = ((2, 3), (3, 2), (3, 3))
    solver_patterns: tuple[str, ...] = ("K1", "K2", "I2", "block01", "2K1", "F1110", "open3x2")
    stability_points: tuple[tuple[int, int], ...] = ((3, 2), (4, 2), (3, 3))
    max_candidates: int = 64

    def to_json(self) -> dict:
        return {k: [list(x) if isinstance(x, tuple) else x for x in v] if isinstance(v, tuple) else v
                for k, v in asdict(self).items()}


QUICK_GRID = Grid(ms=(1, 2, 3, 4), rs=(2, 3, 4), ks=(1, 2), ps=(1, 2))

# which formula families each kind of cell exercises; tests check every family is listed
COVERAGE = {
    "construction:kk": ["complete", "p_complete"],
    "construction:kks": ["complete_uniform", "p_complete_uniform", "p_identity"],
    "construction:ternary-pkks": ["ternary_p_complete_uniform"],
    "construction:i2": ["complete_uniform"],
    "construction:3i2": ["three_i2_r3"],
    "construction:block": ["block", "p_single_block_column"],
    "construction:3row": ["three_row_a", "three_row_b", "transfer_lower"],
    "solver": ["sauer", "complete", "p_complete", "complete_uniform", "block",
               "two_rowed_general", "two_rowed_r3", "sandwich_open_3row"],
    "stability": ["i2_stability_bound"],
    "identity": ["transfer_upper", "complete"],
    "asserted": ["p_identity_r3_asserted"],
}


# -- construction cells -------------------------------------------------------


def _construction_params(grid: Grid):
    for fam in grid.families:
        if fam == "kk":
            for m, r, k, p in itertools.product(grid.ms, grid.rs, grid.ks, grid.ps):
                if k <= m:
                    yield fam, {"m": m, "r": r, "k": k, "p": p}
        elif fam == "kks":
            for m, r, k, p in itertools.product(grid.ms, grid.rs, grid.ks, grid.ps):
                for s in range(k + 1):
                    if k <= m:
                        yield fam, {"m": m, "r": r, "k": k, "s": s, "p": p}
        elif fam == "ternary-pkks":
            for m, k, p in itertools.product(grid.ms, grid.ks, grid.ps):
                for s in range(k + 1):
                    if k <= m and p >= 2 and 3 in grid.rs:
                        yield fam, {"m": m, "k": k, "s": s, "p": p}
        elif fam == "i2":
            for m, r in itertools.product(grid.ms, grid.rs):
                yield fam, {"m": m, "r": r}
        elif fam == "3i2":
            for m in grid.ms:
                if m >= 4 and 3 in grid.rs:
                    yield fam, {"m": m}
        elif fam == "block":
            for m, r, p in itertools.product(grid.ms, grid.rs, grid.ps):
                for a in range(0, max(grid.ks) + 1):
                    for b in range(0, max(grid.ks) + 1 - a):
                        if 1 <= a + b <= m:
                            yield fam, {"m": m, "r": r, "a": a, "b": b, "p": p}
        elif fam == "3row":
            for m, r in itertools.product(grid.ms, grid.rs):
                for variant in THREE_ROW_VARIANTS:
                    yield fam, {"m": m, "r": r, "variant": variant}
        else:
            raise ValueError(f"unknown construction family {fam!r}")


def _build(fam: str, q: dict):
    """(matrix, formula family, formula value, size the construction must have)."""
    if fam == "kk":
        A = construct_Kk_avoider(q["m"], q["r"], q["k"], q["p"])
        name = "p_complete" if q["p"] > 1 else "complete"
        fv = fm.eval(name, **q) if q["p"] > 1 else fm.eval(name, m=q["m"], r=q["r"], k=q["k"])
        return A, name, fv, fv.value
    if fam == "kks":
        A = construct_Kks_avoider(q["m"], q["r"], q["k"], q["s"], q["p"])
        if q["p"] == 1:
            name = "complete_uniform"
            fv = fm.eval(name, m=q["m"], r=q["r"], k=q["k"], s=q["s"])
        elif q["s"] == 1:
            name = "p_identity"
            fv = fm.eval(name, m=q["m"], r=q["r"], k=q["k"], p=q["p"])
        else:
            name = "p_complete_uniform"
            fv = fm.eval(name, **q)
        # the construction realizes the value whenever its own hypothesis holds
        return A, name, fv, fm.complete_value(q["m"], q["r"], q["k"]) + (q["p"] - 1) * fm.C(q["m"], q["k"])
    if fam == "ternary-pkks":
        A = construct_ternary_pKks(q["m"], q["k"], q["s"], q["p"])
        fv = fm.eval("ternary_p_complete_uniform", **q)
        return A, "ternary_p_complete_uniform", fv, ternary_pKks_size(q["m"], q["k"], q["s"], q["p"])
    if fam == "i2":
        A = construct_I2_extremal(q["m"], q["r"])
        fv = fm.eval("complete_uniform", m=q["m"], r=q["r"], k=2, s=1)
        return A, "complete_uniform", fv, fv.value
    if fam == "3i2":
        A = construct_3I2_ternary(q["m"])
        fv = fm.eval("three_i2_r3", m=q["m"])
        return A, "three_i2_r3", fv, fv.value
    if fam == "block":
        A = construct_block_avoider(q["m"], q["r"], q["a"], q["b"], q["p"])
        fv = fm.eval("block", **q)
        return A, "block", fv, fv.value
    if fam == "3row":
        A = construct_3row(q["m"], q["r"], q["variant"])
        name = "three_row_a" if q["variant"] == "zero-identity-one" else "three_row_b"
        fv = fm.eval(name, m=q["m"], r=q["r"])
        if q["r"] == 2:
            expected = THREE_ROW_VARIANTS[q["variant"]](q["m"]).n
        else:
            expected = lift_size(q["m"], q["r"], THREE_ROW_VARIANTS[q["variant"]])
        return A, name, fv, expected
    raise ValueError(fam)


def construction_cell(fam: str, q: dict) -> dict:
    cell = {"kind": "construction", "family": fam, "params": q}
    try:
        A, name, fv, expected = _build(fam, q)
    except HypothesisError as exc:
        cell.update(skipped=True, reason=str(exc), ok=True, hard_failure=False)
        return cell
    tparams = {k: v for k, v in q.items() if k in ("k", "s", "p", "a", "b", "variant")}
    avoid = all(not contains(A, F) for F in targets(fam, **tparams))
    problems = []
    if not A.is_simple:
        problems.append("not simple")
    if not avoid:
        problems.append("contains its target")
    if A.n != expected:
        problems.append(f"size {A.n} != expected {expected}")
    if fv.status == fm.Status.EXACT and fv.hypothesis_ok and A.n != fv.value:
        problems.append(f"size {A.n} != exact formula value {fv.value}")
    if fv.status == fm.Status.LOWER and fv.hypothesis_ok and A.n < fv.value:
        problems.append(f"size {A.n} below lower-bound formula {fv.value}")
    if fv.status == fm.Status.UPPER and A.n > fv.value:
        problems.append(f"size {A.n} above upper-bound formula {fv.value}")
    cell.update(
        skipped=False,
        formula_family=name,
        formula=fv.to_json(),
        construction_size=A.n,
        expected_size=expected,
        simple=A.is_simple,
        avoids_target=avoid,
        mismatches=problems,
        ok=not problems,
        hard_failure=bool(problems),
    )
    return cell


# -- solver cells -------------------------------------------------------------


def _pattern(name: str) -> RMatrix:
    return {
        "K1": build_Kk(1),
        "K2": build_Kk(2),
        "K3": build_Kk(3),
        "I2": build_identity(2),
        "block01": build_block(1, 1),
        "2K1": multiply(2, build_Kk(1)),
        "F1110": build_F((1, 1, 1, 0)),
        "open3x2": F_OPEN_3x2,
    }[name]


def _solver_formulas(name: str, m: int, r: int) -> list[tuple[str, fm.ForbValue]]:
    out = []
    if name in ("K1", "K2", "K3"):
        k = int(name[1])
        out.append(("complete", fm.eval("complete", m=m, r=r, k=k)))
        if r == 2:
            out.append(("sauer", fm.eval("sauer", m=m, k=k)))
    elif name == "2K1":
        out.append(("p_complete", fm.eval("p_complete", m=m, r=r, k=1, p=2)))
    elif name == "I2":
        out.append(("complete_uniform", fm.eval("complete_uniform", m=m, r=r, k=2, s=1)))
    elif name == "block01":
        out.append(("block", fm.eval("block", m=m, r=r, a=1, b=1, p=1)))
    elif name == "F1110":
        q = dict(m=m, a=1, b=1, c=1, d=0)
        out.append(("two_rowed_general", fm.eval("two_rowed_general", r=r, **q)))
        if r == 3:
            out.append(("two_rowed_r3", fm.eval("two_rowed_r3", **q)))
    elif name == "open3x2":
        out.append(("sandwich_open_3row", fm.eval("sandwich_open_3row", m=m, r=r)))
    return out


def solver_cell(name: str, m: int, r: int, budget: SearchBudget | None = None, backend: str | None = None) -> dict:
    F = _pattern(name)
    rep = forb_exact(m, r, F, budget, backend=backend, formula_bounds=False)
    cell = {
        "kind": "solver",
        "pattern": name,
        "params": {"m": m, "r": r},
        "solver_optimum": rep.optimum,
        "exhausted": rep.exhausted,
        "nodes_expanded": rep.nodes_expanded,
        "witness_avoids": not contains(rep.witness, F),
    }
    problems = [] if cell["witness_avoids"] else ["solver witness contains the pattern"]
    formulas = []
    for fam, fv in _solver_formulas(name, m, r):
        formulas.append({"family": fam, **fv.to_json()})
        if not rep.exhausted:
            continue
        opt = rep.optimum
        if fv.hypothesis_ok and fv.status in (fm.Status.EXACT, fm.Status.UNVERIFIED) and opt != fv.value:
            problems.append(f"{fam}: formula {fv.value} != solver {opt}")
        if fv.status == fm.Status.LOWER and fv.hypothesis_ok and opt < fv.value:
            problems.append(f"{fam}: solver {opt} below lower bound {fv.value}")
        if fv.upper is not None and opt > fv.upper:
            problems.append(f"{fam}: solver {opt} above upper bound {fv.upper}")
        if fv.status == fm.Status.UPPER and opt > fv.value:
            problems.append(f"{fam}: solver {opt} above upper bound {fv.value}")
    cell.update(formulas=formulas, mismatches=problems, ok=not problems, hard_failure=bool(problems))
    return cell


def stability_cell(m: int, r: int, budget: SearchBudget | None = None) -> dict:
    bound = stability_bound(m, r)
    found = enumerate_maximal(m, r, build_identity(2), budget)
    nontrans = [A for A in found if not is_transitive(tournament_of(A))]
    bad = [A.n for A in nontrans if A.n > bound]
    return {
        "kind": "stability",
        "params": {"m": m, "r": r},
        "bound": bound,
        "maximal_avoiders": len(found),
        "non_transitive": len(nontrans),
        "largest_non_transitive": max((A.n for A in nontrans), default=None),
        "mismatches": [f"non-transitive avoider of size {n} exceeds {bound}" for n in bad],
        "ok": not bad,
        "hard_failure": bool(bad),
    }


def identity_cell(ms=range(0, 11), rs=range(2, 7), ks=range(1, 5)) -> dict:
    bad = []
    for m, r, k in itertools.product(ms, rs, ks):
        lhs = fm.transfer_upper(m, r, lambda j: fm.sauer_value(j, k))
        if lhs != fm.complete_value(m, r, k):
            bad.append(f"m={m} r={r} k={k}: {lhs} != {fm.complete_value(m, r, k)}")
    bad += fm.check_identities()
    return {"kind": "identity", "params": {"m_max": max(ms), "r_max": max(rs), "k_max": max(ks)},
            "mismatches": bad, "ok": not bad, "hard_failure": bool(bad)}


def asserted_cell() -> dict:
    vals = [{"m": m, "p": p, **fm.eval("p_identity_r3_asserted", m=m, p=p).to_json()}
            for m in (4, 5, 6) for p in (4, 5)]
    return {"kind": "asserted", "params": {}, "values": vals,
            "note": "no desk-scale solver check available", "ok": True, "hard_failure": False}


def trend_check(m: int = 30, r: int = 4, k: int = 2, tolerance: float = 0.05) -> dict:
    """Relative gap between log forb / m and the log(r-1) growth rate."""
    v = fm.eval("complete", m=m, r=r, k=k).value
    ratio = math.log(v) / (m * math.log(r - 1))
    gaps = []
    for mm in (10, 20, 30, 40, 60, 80):
        vv = fm.eval("complete", m=mm, r=r, k=k).value
        gaps.append(math.log(vv) / (mm * math.log(r - 1)) - 1)
    return {
        "kind": "trend",
        "params": {"m": m, "r": r, "k": k},
        "relative_gap": ratio - 1,
        "within_tolerance": abs(ratio - 1) <= tolerance,
        "gap_sequence": gaps,
        "monotone": all(a > b > 0 for a, b in zip(gaps, gaps[1:])),
        "ok": True,
        "hard_failure": False,
    }


# -- driver -------------------------------------------------------------------


def _run_task(task):
    kind, args = task
    if kind == "construction":
        return construction_cell(*args)
    if kind == "solver":
        return solver_cell(*args)
    if kind == "stability":
        return stability_cell(*args)
    raise ValueError(kind)


def _cell_key(cell: dict) -> tuple:
    return (cell["kind"], cell.get("family", cell.get("pattern", "")), sorted(cell["params"].items()))


def verify(
    grid: Grid | None = None,
    mode: str = "all",
    *,
    jobs: int = 1,
    budget: SearchBudget | None = None,
) -> dict:
    """Run the requested cross-checks and return a JSON-ready report."""
    grid = grid or Grid()
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    started = _dt.datetime.now(_dt.timezone.utc).isoformat()
    tasks = []
    if mode in ("formula-vs-construction", "all"):
        tasks += [("construction", (fam, q)) for fam, q in _construction_params(grid)]
    if mode in ("formula-vs-solver", "all"):
        for m, r in grid.solver_points:
            if r**m > grid.max_candidates:
                raise GridTooLarge(f"(m, r) = ({m}, {r}) has {r**m} candidates, limit {grid.max_candidates}")
        tasks += [("solver", (p, m, r, budget)) for m, r in grid.solver_points for p in grid.solver_patterns]
        tasks += [("stability", (m, r, budget)) for m, r in grid.stability_points]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cells = list(pool.map(_run_task, tasks, chunksize=8))
    else:
        cells = [_run_task(t) for t in tasks]
    if mode in ("formula-vs-construction", "all"):
        cells.append(identity_cell())
        cells.append(asserted_cell())
    cells.append(trend_check())
    cells.sort(key=_cell_key)
    failures = [c for c in cells if c["hard_failure"]]
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "mode": mode,
        "grid": grid.to_json(),
        "started": started,
        "finished": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "summary": {
            "cells": len(cells),
            "skipped": sum(1 for c in cells if c.get("skipped")),
            "hard_failures": len(failures),
        },
        "cells": cells,
        "ok": not failures,
    }


REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "rforb verification report",
    "type": "object",
    "required": ["schema_version", "tool_version", "mode", "grid", "started", "finished", "summary", "cells", "ok"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "tool_version": {"type": "string"},
        "mode": {"enum": list(MODES)},
        "grid": {"type": "object"},
        "started": {"type": "string"},
        "finished": {"type": "string"},
        "ok": {"type": "boolean"},
        "summary": {
            "type": "object",
            "required": ["cells", "skipped", "hard_failures"],
            "properties": {k: {"type": "integer", "minimum": 0} for k in ("cells", "skipped", "hard_failures")},
        },
        "cells": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind", "params", "ok", "hard_failure"],
                "properties": {
                    "kind": {"enum": ["construction", "solver", "stability", "identity", "asserted", "trend"]},
                    "params": {"type": "object"},
                    "ok": {"type": "boolean"},
                    "hard_failure": {"type": "boolean"},
                    "mismatches": {"type": "array", "items": {"type": "string"}},
                    "formula": {
                        "type": "object",
                        "required": ["value", "status", "hypothesis_ok", "hypothesis_text"],
                    },
                },
            },
        },
    },
}


def strip_volatile(report: dict) -> dict:
    """Copy of a report without timestamps and timing-dependent counters."""
    out = {k: v for k, v in report.items() if k not in ("started", "finished")}
    out["cells"] = [{k: v for k, v in c.items() if k != "nodes_expanded"} for c in report["cells"]]
    return out


__all__ = [
    "COVERAGE", "Grid", "GridTooLarge", "MODES", "QUICK_GRID", "REPORT_SCHEMA", "SCHEMA_VERSION",
    "construction_cell", "solver_cell", "stability_cell", "strip_volatile", "trend_check", "verify",
]

