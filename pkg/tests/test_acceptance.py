"""The twelve acceptance criteria, each timed against its stated limit.

Run under pytest (a PASS/FAIL line per criterion is printed in the terminal
summary) or directly: ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import itertools
import math
import os
import random
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from oracles import exhaustive_forb, hereditary_forb, naive_contains, one_row_forb  # noqa: E402
from rforb import formulas as fm  # noqa: E402
from rforb.analysis import (  # noqa: E402
    is_transitive,
    mark_pairs_I2,
    reduce_r_gt_3,
    split_rare_patterns,
    stability_bound,
    tournament_of,
)
from rforb.constructions import construct_3I2_ternary, construct_3row, construct_I2_extremal  # noqa: E402
from rforb.containment import contains  # noqa: E402
from rforb.matrix import (  # noqa: E402
    RMatrix,
    TwoRowSpec,
    build_block,
    build_F,
    build_identity,
    build_Kk,
    multiply,
    row_permutation_canon,
)
from rforb.solver import enumerate_maximal, enumerate_optima, forb_exact, lower_bound_greedy  # noqa: E402
from rforb.verify import Grid, verify  # noqa: E402

RESULTS: list[str] = []
I2 = build_identity(2)


def _opt(m, r, F):
    # formula early-stop off: the search must not lean on the values it is checked against
    rep = forb_exact(m, r, F, formula_bounds=False)
    assert rep.exhausted
    return rep.optimum


def crit_1():
    bad = []
    for m in (2, 3, 4):
        if _opt(m, 2, build_Kk(2)) != m + 1:
            bad.append(f"K2 m={m}")
        if _opt(m, 2, build_Kk(3)) != math.comb(m, 2) + m + 1:
            bad.append(f"K3 m={m}")
    return not bad, 5, f"mismatches: {bad or 'none'}"


def crit_2():
    got = {(m, 3): _opt(m, 3, I2) for m in (2, 3)}
    want = {(m, 3): fm.eval("complete_uniform", m=m, r=3, k=2, s=1).value for m in (2, 3)}
    return got == want == {(2, 3): 8, (3, 3): 20}, 60, f"solver {got}, formula {want}"


def crit_3():
    F = build_block(1, 1)
    got = {m: _opt(m, 3, F) for m in (2, 3)}
    want = {m: fm.eval("p_single_block_column", m=m, r=3, p=1).value for m in (2, 3)}
    return got == want == {2: 7, 3: 15}, 60, f"solver {got}, formula {want}"


def crit_4():
    got = {(m, r): _opt(m, r, build_Kk(1)) for m, r in [(2, 3), (3, 3), (2, 4)]}
    return all(v == (r - 1) ** m for (m, r), v in got.items()), 60, f"{got}"


def crit_5():
    classes = enumerate_optima(3, 3, I2)
    ok = len(classes) == 1 and classes[0] == row_permutation_canon(construct_I2_extremal(3, 3))
    return ok, 600, f"{len(classes)} class(es), size {classes[0].n if classes else None}"


def crit_6():
    details, violations = [], 0
    for m, r in [(3, 2), (4, 2), (3, 3)]:
        bound = stability_bound(m, r)
        maximal = enumerate_maximal(m, r, I2)
        nontrans = [A for A in maximal if not is_transitive(tournament_of(A))]
        violations += sum(A.n > bound for A in nontrans)
        details.append(f"({m},{r}): {len(maximal)} maximal, {len(nontrans)} non-transitive")
    return violations == 0, None, f"{violations} violations; " + "; ".join(details)


def crit_7():
    rep = verify(Grid(), "formula-vs-construction")
    built = [c for c in rep["cells"] if c["kind"] == "construction" and not c["skipped"]]
    held = [c for c in built if c["formula"]["hypothesis_ok"]]
    bad = [
        c
        for c in held
        if c["mismatches"]
        or not (c["simple"] and c["avoids_target"])
        or str(c["construction_size"]) != c["formula"]["value"]
    ]
    # the ternary p*K formula for p >= 3 is itself a construction bound, so it cannot carry "exact"
    bound_only = [c for c in held if c["formula_family"] == "ternary_p_complete_uniform" and c["params"]["p"] >= 3]
    not_exact = [c for c in held if c["formula"]["status"] != "exact" and c not in bound_only]
    ok = not bad and not not_exact
    return ok, 600, (
        f"{len(held)} hypothesis-satisfying constructions, {len(bad)} mismatches, "
        f"{len(not_exact)} non-exact, {len(bound_only)} on the ternary construction bound"
    )


def crit_8():
    A = construct_3I2_ternary(4)
    target = fm.eval("p_complete", m=4, r=3, k=2, p=3)
    B, _ = split_rare_patterns(A, cap=2)
    marks = mark_pairs_I2(A, B)
    ok = (
        A.n == 59 == target.value - 1
        and target.status is fm.Status.EXACT
        and A.is_simple
        and not contains(A, multiply(3, I2))
        and marks.max_per_key <= 2
    )
    return ok, None, f"|A|={A.n}, forb(4,3,3K2)={target.value}, max marks per pair {marks.max_per_key}"


def crit_9():
    spec = TwoRowSpec(0, 1, 2, 0)
    F, Fp = build_F(spec), build_F(spec.balanced())
    failures, rewritten = 0, 0
    for seed in range(50):
        A = lower_bound_greedy(4, 5, F, "random", seed)
        B = reduce_r_gt_3(A, spec, 5)
        rewritten += B != A
        if B.n != A.n or not B.is_simple or contains(B, Fp):
            failures += 1
    return failures == 0, None, f"{failures} failures over 50 avoiders ({rewritten} needed rewriting)"


def crit_10():
    rng = random.Random(20240611)
    disagreements, checked = 0, 0
    for mA, nA, r, mF, nF in itertools.product(range(1, 5), range(0, 7), (2, 3), range(1, 4), range(1, 5)):
        for trial in range(3):
            A = RMatrix(mA, r, [tuple(rng.randrange(r) for _ in range(mA)) for _ in range(nA)])
            if trial == 2 and mF <= mA and nF <= nA:
                rows, cols = rng.sample(range(mA), mF), rng.sample(range(nA), nF)
                F = RMatrix(mF, r, [tuple(A.cols[j][i] for i in rows) for j in cols])
            else:
                F = RMatrix(mF, r, [tuple(rng.randrange(r) for _ in range(mF)) for _ in range(nF)])
            disagreements += contains(A, F) != naive_contains(A, F)
            checked += 1
    patterns = [build_Kk(1), build_Kk(2), I2, build_block(1, 1), multiply(2, build_Kk(1)), build_F((0, 1, 2, 0))]
    spaces = [(m, r) for m in range(1, 6) for r in range(2, 33) if r**m <= 32]
    solver_checked = 0
    for m, r in spaces:
        for F in patterns:
            if r**m <= 27:
                best, _ = exhaustive_forb(m, r, F)
            elif m == 1:
                best = one_row_forb(r, F)  # 2^r subsets is out of reach; count digits instead
            else:
                best, _ = hereditary_forb(m, r, F)
            disagreements += _opt(m, r, F) != best
            solver_checked += 1
    ok = disagreements == 0
    return ok, None, f"{checked} containment pairs, {solver_checked} solver cells, {disagreements} disagreements"


def crit_11():
    bad = [
        (m, r, k)
        for m in range(0, 11)
        for r in range(2, 7)
        for k in range(1, 5)
        if fm.transfer_upper(m, r, lambda j: fm.sauer_value(j, k)) != fm.eval("complete", m=m, r=r, k=k).value
    ]
    return not bad, None, f"{len(bad)} mismatches over m<=10, r<=6, k<=4"


def crit_12():
    bad = []
    for m in range(0, 7):
        for r in range(2, 6):
            a = construct_3row(m, r, "zero-identity-one").n
            b = construct_3row(m, r, "triangular-union").n
            if a != fm.three_row_a_value(m, r) or b != fm.three_row_b_value(m, r):
                bad.append((m, r))
    for m in range(2, 7):
        if fm.three_row_a_value(m, 2) != m + 2 or construct_3row(m, 2, "zero-identity-one").n != m + 2:
            bad.append(("m+2", m))
    for m in range(1, 7):
        if fm.three_row_b_value(m, 2) != 2 * m or construct_3row(m, 2, "triangular-union").n != 2 * m:
            bad.append(("2m", m))
    return not bad, None, f"mismatches: {bad or 'none'}"


CRITERIA = {
    1: ("Sauer baseline", crit_1),
    2: ("identity, ternary", crit_2),
    3: ("block column", crit_3),
    4: ("K_1 family", crit_4),
    5: ("uniqueness of the I_2 extremal", crit_5),
    6: ("stability", crit_6),
    7: ("construction ledger", crit_7),
    8: ("3*I_2 witness and mark audit", crit_8),
    9: ("reduction soundness", crit_9),
    10: ("oracle suites", crit_10),
    11: ("transfer identity", crit_11),
    12: ("three-row lifts", crit_12),
}


def run_criterion(num: int) -> tuple[bool, str]:
    name, fn = CRITERIA[num]
    t0 = time.perf_counter()
    try:
        ok, limit, detail = fn()
    except AssertionError as exc:
        ok, limit, detail = False, None, f"assertion: {exc}"
    elapsed = time.perf_counter() - t0
    if limit is not None and elapsed >= limit:
        ok = False
        detail += f"; exceeded {limit}s"
    line = f"criterion {num:2d} [{name}]: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s) {detail}"
    RESULTS.append(line)
    return ok, line


@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num):
    ok, line = run_criterion(num)
    assert ok, line


if __name__ == "__main__":
    outcomes = [run_criterion(n) for n in sorted(CRITERIA)]
    for _, line in outcomes:
        print(line)
    sys.exit(0 if all(ok for ok, _ in outcomes) else 1)
