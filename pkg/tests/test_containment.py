import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import naive_contains
from rforb.constructions import construct_I2_extremal
from rforb.containment import avoids, contains, contains_with_column, witness
from rforb.matrix import (
    MatrixError,
    RMatrix,
    build_identity,
    build_Kk,
    complement01,
    multiply,
    restrict,
    zero_rows_matrix,
)
from strategies import permutations_of, rmatrices

I2 = build_identity(2)
K2 = build_Kk(2)


def test_examples():
    F = RMatrix.from_rows([[0, 1, 1], [1, 0, 1]])
    assert contains(F, F)
    assert contains(K2, I2)
    assert not contains(RMatrix.from_rows([[0, 1], [0, 1]]), multiply(2, build_Kk(1)))
    assert not contains(construct_I2_extremal(3, 3), I2)
    assert avoids(construct_I2_extremal(3, 3), I2)


def test_empty_and_degenerate_patterns():
    A = RMatrix.from_rows([[0, 1]])
    assert contains(A, RMatrix(2, 2, []))  # no columns: vacuous
    assert contains(A, zero_rows_matrix(2, 2))
    assert not contains(A, zero_rows_matrix(2, 3))  # needs 3 columns
    assert not contains(A, K2)  # too many rows
    assert not contains(RMatrix(2, 2, []), I2)


def test_non_binary_pattern():
    A = RMatrix(2, 4, [(3, 2), (0, 1), (2, 2)])
    assert contains(A, RMatrix(2, 4, [(2, 3)]))
    assert not contains(A, RMatrix(2, 4, [(3, 3)]))


def test_witness_examples():
    w = witness(K2, I2)
    assert w.row_map == (0, 1)
    assert [K2.cols[j] for j in w.col_map] == list(I2.cols)
    assert w.check(K2, I2)
    assert w.to_json() == {"row_map": [1, 2], "col_map": [j + 1 for j in w.col_map]}
    all_twos = RMatrix(3, 3, [(2, 2, 2)])
    assert witness(all_twos, build_Kk(1)) is None


def test_contains_with_column_incremental():
    A = RMatrix(2, 2, [(0, 0), (0, 1), (1, 0)])
    j = A.cols.index((1, 0))
    assert contains_with_column(A, I2, j)
    assert not contains_with_column(A, I2, A.cols.index((0, 0)))
    with pytest.raises(MatrixError):
        contains_with_column(A, I2, 3)


def test_contains_with_duplicate_column():
    # F simple and present without column j, but j duplicates a used column
    A = RMatrix(2, 2, [(0, 1), (1, 0), (1, 0)])
    for j in range(A.n):
        assert contains_with_column(A, I2, j)


def _random_matrix(rng, m, n, r):
    return RMatrix(m, r, [tuple(rng.randrange(r) for _ in range(m)) for _ in range(n)])


def _planted(rng, A, mF, nF):
    rows = rng.sample(range(A.m), mF)
    cols = rng.sample(range(A.n), nF)
    F = RMatrix(mF, A.r, [tuple(A.cols[j][i] for i in rows) for j in cols])
    return F.permute_rows(rng.sample(range(mF), mF))


def test_oracle_sweep_small_grid():
    """Every shape A <= 4x6 (r <= 3) against F <= 3x4, random and planted."""
    rng = random.Random(20240611)
    checked = 0
    for mA, nA, r, mF, nF in itertools.product(range(1, 5), range(0, 7), (2, 3), range(1, 4), range(1, 5)):
        for trial in range(3):
            A = _random_matrix(rng, mA, nA, r)
            if trial == 2 and mF <= mA and nF <= nA:
                F = _planted(rng, A, mF, nF)
            else:
                F = _random_matrix(rng, mF, nF, r)
            assert contains(A, F) == naive_contains(A, F), (A, F)
            checked += 1
    assert checked == 4 * 7 * 2 * 3 * 4 * 3


@given(rmatrices(max_m=4, max_n=6), rmatrices(max_m=3, max_n=4, min_m=1))
def test_oracle_equivalence(A, F):
    F = F.with_alphabet(max(F.r, A.r)) if F.r < A.r else F
    A = A.with_alphabet(max(F.r, A.r)) if A.r < F.r else A
    assert contains(A, F) == naive_contains(A, F)


@given(rmatrices(max_m=4, max_n=6, min_m=1), st.integers(1, 3), st.integers(1, 4), st.randoms())
def test_planted_copy_is_found(A, mF, nF, rnd):
    if mF > A.m or nF > A.n:
        return
    F = _planted(rnd, A, mF, nF)
    assert contains(A, F)
    w = witness(A, F)
    assert w is not None and w.check(A, F)


@given(rmatrices(max_m=4, max_n=6, min_m=1), rmatrices(max_m=3, max_n=4, min_m=1), st.data())
def test_permutation_invariance(A, F, data):
    F = RMatrix(F.m, A.r, [tuple(min(x, A.r - 1) for x in c) for c in F.cols])
    base = contains(A, F)
    pa = data.draw(permutations_of(A.m))
    pf = data.draw(permutations_of(F.m))
    assert contains(A.permute_rows(pa), F) == base
    assert contains(A, F.permute_rows(pf)) == base


@given(rmatrices(max_m=4, max_n=6, binary=True), rmatrices(max_m=3, max_n=4, binary=True, min_m=1))
def test_complement_symmetry(A, F):
    assert contains(A, F) == contains(complement01(A), complement01(F))


@given(rmatrices(max_m=4, max_n=7), rmatrices(max_m=2, max_n=2, min_m=1), st.integers(1, 3), st.integers(1, 3))
def test_multiplicity_monotone(A, F, p, q):
    F = RMatrix(F.m, A.r, [tuple(min(x, A.r - 1) for x in c) for c in F.cols])
    if F.n == 0:
        return
    lo, hi = sorted((p, q))
    if contains(A, multiply(hi, F)):
        assert contains(A, multiply(lo, F))


@given(rmatrices(max_m=4, max_n=6, binary=True), rmatrices(max_m=3, max_n=4, binary=True, min_m=1), st.data())
def test_monotone_under_subconfiguration(A, Fp, data):
    # any restriction of F' to some rows and columns is a subconfiguration of F'
    if Fp.n == 0:
        return
    rows = data.draw(st.sets(st.integers(0, Fp.m - 1), min_size=1))
    keep = data.draw(st.sets(st.integers(0, Fp.n - 1), min_size=1))
    F = restrict(RMatrix(Fp.m, 2, [Fp.cols[j] for j in keep]), rows)
    assert contains(Fp, F)
    if contains(A, Fp):
        assert contains(A, F)


@given(rmatrices(max_m=4, max_n=6, min_m=1), rmatrices(max_m=3, max_n=3, min_m=1))
def test_column_variant_consistent(A, F):
    F = RMatrix(F.m, A.r, [tuple(min(x, A.r - 1) for x in c) for c in F.cols])
    if A.n == 0 or F.n == 0:
        return
    hits = [contains_with_column(A, F, j) for j in range(A.n)]
    assert any(hits) == contains(A, F)
    for j, h in enumerate(hits):
        rest = RMatrix(A.m, A.r, A.cols[:j] + A.cols[j + 1:])
        # if no copy uses column j, removing it keeps containment unchanged
        if not h:
            assert contains(rest, F) == contains(A, F)


@given(rmatrices(max_m=4, max_n=6), rmatrices(max_m=3, max_n=4, min_m=1))
def test_witness_revalidates(A, F):
    F = RMatrix(F.m, A.r, [tuple(min(x, A.r - 1) for x in c) for c in F.cols])
    w = witness(A, F)
    assert (w is not None) == contains(A, F)
    if w is not None:
        assert w.check(A, F)
