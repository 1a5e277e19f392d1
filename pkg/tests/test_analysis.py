import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rforb.analysis import (
    PreconditionError,
    Tournament,
    chains_hold,
    decompose,
    is_transitive,
    mark_blocks,
    mark_pairs_I2,
    normalize_ternary,
    reduce_r_gt_3,
    split_rare_patterns,
    stability_bound,
    ternary_blocks,
    tournament_of,
)
from rforb.constructions import construct_3I2_ternary, construct_block_avoider, construct_I2_extremal
from rforb.containment import contains
from rforb.matrix import MatrixError, RMatrix, TwoRowSpec, build_F, build_identity, multiply
from rforb.solver import enumerate_maximal, forb_exact, lower_bound_greedy

I2 = build_identity(2)


def test_tournament_of_extremal_follows_row_order():
    T = tournament_of(construct_I2_extremal(3, 3))
    assert T.arcs == {(0, 1), (0, 2), (1, 2)}
    assert is_transitive(T)


def test_tournament_tie_break_and_forced_arc():
    T = tournament_of(RMatrix(3, 3, [(2, 2, 2)]))
    assert T.arcs == {(0, 1), (0, 2), (1, 2)}
    T = tournament_of(RMatrix(2, 2, [(0, 1)]))
    assert T.arcs == {(1, 0)}
    assert T.to_json() == {"m": 2, "arcs": [[2, 1]], "transitive": True}


def test_tournament_requires_I2_avoider():
    with pytest.raises(PreconditionError):
        tournament_of(RMatrix(2, 2, [(0, 1), (1, 0)]))


def test_tournament_validation():
    with pytest.raises(MatrixError):
        Tournament(3, frozenset({(0, 1), (1, 2)}))
    with pytest.raises(MatrixError):
        Tournament(2, frozenset({(0, 1), (1, 0)}))


def test_transitivity_examples():
    line = Tournament(4, frozenset((i, j) for i, j in itertools.combinations(range(4), 2)))
    assert is_transitive(line)
    cycle = Tournament(3, frozenset({(0, 1), (1, 2), (2, 0)}))
    assert not is_transitive(cycle)
    assert not is_transitive(Tournament(3, frozenset({(1, 0), (2, 1), (0, 2)})))


@given(st.integers(3, 6), st.randoms())
def test_transitive_iff_acyclic(m, rnd):
    arcs = set()
    for i, j in itertools.combinations(range(m), 2):
        arcs.add((i, j) if rnd.random() < 0.5 else (j, i))
    T = Tournament(m, frozenset(arcs))
    outdeg = sorted(sum(1 for u, _ in arcs if u == v) for v in range(m))
    # a tournament is transitive exactly when its score sequence is 0, 1, ..., m-1
    assert is_transitive(T) == (outdeg == list(range(m)))


def test_stability_bound_examples():
    assert stability_bound(3, 2) == 2
    assert stability_bound(4, 3) == 44
    assert stability_bound(5, 4) < 5 * 4**3 + 4**5


@pytest.mark.parametrize("m, r", [(3, 2), (4, 2), (3, 3)])
def test_stability_over_all_maximal_avoiders(m, r):
    bound = stability_bound(m, r)
    best = forb_exact(m, r, I2).optimum
    for A in enumerate_maximal(m, r, I2):
        T = tournament_of(A)
        if not is_transitive(T):
            assert A.n <= bound
        if A.n == best:
            assert is_transitive(T)


# -- rewrites -----------------------------------------------------------------

SPEC = TwoRowSpec(0, 1, 2, 0)


def test_reduce_leaves_balanced_avoider_alone():
    A = construct_I2_extremal(3, 4)
    assert reduce_r_gt_3(A, SPEC, 4) == A


def test_reduce_preconditions():
    A = lower_bound_greedy(3, 4, build_F(SPEC), seed=1)
    with pytest.raises(PreconditionError):
        reduce_r_gt_3(A.with_alphabet(4), SPEC, 5)
    with pytest.raises(PreconditionError):
        reduce_r_gt_3(construct_I2_extremal(3, 3), SPEC)
    with pytest.raises(PreconditionError):
        reduce_r_gt_3(A, TwoRowSpec(1, 0, 2, 0))
    with pytest.raises(PreconditionError):
        reduce_r_gt_3(RMatrix(3, 4, [(0, 1, 2), (1, 0, 2), (0, 1, 3)]), SPEC)  # contains F
    with pytest.raises(PreconditionError):
        reduce_r_gt_3(RMatrix(2, 4, []), TwoRowSpec(0, 3, 3, 0))  # (r-2)^0 < 4


@pytest.mark.parametrize("seed", range(12))
def test_reduce_random_greedy_avoiders(seed):
    F = build_F(SPEC)
    A = lower_bound_greedy(4, 5, F, "random", seed)
    B = reduce_r_gt_3(A, SPEC, 5)
    assert B.n == A.n and B.is_simple
    assert not contains(B, build_F(SPEC.balanced()))


def test_reduce_rewrites_hosting_pair():
    # rows 0,1 show (0,1) and (1,0) once each, so they host F(0,1,1,0)
    A = RMatrix(3, 4, [(0, 1, 2), (1, 0, 2), (2, 2, 0)])
    B = reduce_r_gt_3(A, SPEC, 4)
    assert B.n == 3
    assert not contains(B, I2)
    assert (0, 1, 2) in B and (0, 1, 3) in B


def _ternary_avoider(seed):
    F = build_F((1, 1, 2, 0))
    return lower_bound_greedy(4, 3, F, "random", seed), TwoRowSpec(1, 1, 2, 0)


def test_normalize_ternary():
    done = 0
    for seed in range(20):
        A, spec = _ternary_avoider(seed)
        hosting = [p for p in itertools.combinations(range(4), 2)
                   if contains(RMatrix(2, 3, [(c[p[0]], c[p[1]]) for c in A.cols]), build_F(spec.balanced()))]
        if not hosting:
            with pytest.raises(PreconditionError):
                normalize_ternary(A, spec)
            continue
        B = normalize_ternary(A, spec)
        assert B.n == A.n and B.is_simple
        assert not contains(B, build_F(spec))
        assert chains_hold(B, hosting[0])
        done += 1
    assert done >= 5


def test_normalize_ternary_explicit_pair_and_errors():
    A, spec = _ternary_avoider(0)
    with pytest.raises(PreconditionError):
        normalize_ternary(A.with_alphabet(4), spec)
    hosting = [p for p in itertools.combinations(range(4), 2)
               if contains(RMatrix(2, 3, [(c[p[0]], c[p[1]]) for c in A.cols]), build_F(spec.balanced()))]
    if hosting:
        B = normalize_ternary(A, spec, hosting[-1])
        assert chains_hold(B, hosting[-1])
    blocked = [p for p in itertools.combinations(range(4), 2) if p not in hosting]
    if blocked:
        with pytest.raises(PreconditionError):
            normalize_ternary(A, spec, blocked[0])


def test_ternary_blocks_keys():
    A = RMatrix(3, 3, [(0, 0, 1), (2, 2, 0), (2, 2, 1)])
    blocks = ternary_blocks(A, (0, 1))
    assert blocks[(0, 0)] == {(1,)} and blocks[(2, 2)] == {(0,), (1,)}
    assert not chains_hold(A, (0, 1))


# -- marks --------------------------------------------------------------------


def test_marks_empty_extra():
    B = construct_I2_extremal(3, 3)
    t = mark_pairs_I2(B, B)
    assert t.total == 0 and t.column_marks == []


def test_marks_single_column():
    A = RMatrix(2, 2, [(0, 1)])
    t = mark_pairs_I2(A, RMatrix(2, 2, []))
    assert t.counts == {(0, 1): 1}
    assert t.to_json()["entries"] == [{"pair": [1, 2], "marks": 1}]


def test_marks_errors():
    with pytest.raises(PreconditionError):
        mark_pairs_I2(RMatrix(2, 2, [(0, 1)]), RMatrix(2, 2, [(0, 1), (1, 0)]))
    with pytest.raises(PreconditionError):
        decompose(RMatrix(2, 2, []), RMatrix(2, 2, [(0, 0)]))
    with pytest.raises(MatrixError):
        mark_blocks(RMatrix(2, 2, []), 2, 1)


def test_3I2_mark_audit():
    A = construct_3I2_ternary(4)
    B, Cm = split_rare_patterns(A, cap=2)
    assert not contains(B, I2)
    t = mark_pairs_I2(A, B)
    assert max(t.counts.values()) <= 2
    assert t.total <= 2 * 6
    assert len(t.column_marks) == Cm.n
    with pytest.raises(PreconditionError):
        split_rare_patterns(RMatrix(3, 2, [(0, 1, 0), (0, 1, 1), (1, 0, 0), (1, 0, 1)]), cap=1)


def test_mark_blocks_examples():
    assert mark_blocks(RMatrix(3, 3, [(2, 2, 2)] * 3), 1, 1).total == 0
    t = mark_blocks(construct_block_avoider(3, 3, 1, 1, 2), 1, 1)
    assert t.max_per_key <= 1
    t = mark_blocks(RMatrix(3, 3, [(0, 1, 2)]), 1, 1)
    assert t.total == 1 and t.column_marks == [1]
    assert t.to_json()["entries"][0].keys() == {"X", "Y", "marks"}


@settings(max_examples=30)
@given(st.integers(2, 4), st.integers(3, 4), st.integers(0, 2), st.integers(0, 2), st.integers(1, 3), st.randoms())
def test_mark_audit_cross_check(m, r, a, b, p, rnd):
    if not 1 <= a + b <= m:
        return
    cols = sorted({tuple(rnd.randrange(r) for _ in range(m)) for _ in range(rnd.randrange(1, 12))})
    A = RMatrix(m, r, cols)
    t = mark_blocks(A, a, b)
    # recount directly from the definition
    for (X, Y), n in t.counts.items():
        assert n == sum(1 for c in A.cols if all(c[i] == 0 for i in X) and all(c[i] == 1 for i in Y))
    block = RMatrix(a + b, 2, [(0,) * a + (1,) * b] * p)
    if t.max_per_key > p - 1:
        assert contains(A, block)
    else:
        assert not contains(A, block)


def test_reduce_soundness_seeded_batch():
    rng = random.Random(5)
    F = build_F(SPEC)
    for _ in range(10):
        A = lower_bound_greedy(4, 5, F, "random", rng.randrange(10**6))
        B = reduce_r_gt_3(A, SPEC, 5)
        assert B.n == A.n and not contains(B, multiply(1, build_F(SPEC.balanced())))
