"""Configuration containment ``F < A`` and witnesses.

Under a fixed injective map from the rows of F into the rows of A, every
column of A restricts to exactly one pattern.  F then occurs iff, for every
distinct restricted pattern of F, A has at least as many columns with that
pattern as F does.  No bipartite matching is needed, so the search reduces
to counting over row maps.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .matrix import MatrixError, RMatrix

# bincount is used while the pattern space stays this small
_DIRECT_ADDRESS_LIMIT = 1 << 20


@dataclass(frozen=True)
class Witness:
    """``row_map[i]`` / ``col_map[j]``: the A-row / A-column hosting F's row i / column j."""

    row_map: tuple[int, ...]
    col_map: tuple[int, ...]

    def to_json(self) -> dict:
        return {"row_map": [i + 1 for i in self.row_map], "col_map": [j + 1 for j in self.col_map]}

    def check(self, A: RMatrix, F: RMatrix) -> bool:
        if len(set(self.row_map)) != len(self.row_map) or len(set(self.col_map)) != len(self.col_map):
            return False
        return all(
            A.cols[self.col_map[j]][self.row_map[i]] == F.cols[j][i]
            for i in range(F.m)
            for j in range(F.n)
        )


def _eligible_rows(A: RMatrix, F: RMatrix, base: int) -> list[int]:
    """A-rows whose digit histogram dominates that of at least one F-row."""
    a_hist = np.zeros((A.m, base), dtype=np.int64)
    arr = A.array
    for d in range(A.r):
        a_hist[:, d] = (arr == d).sum(axis=0)
    f_hist = np.zeros((F.m, base), dtype=np.int64)
    farr = F.array
    for d in range(F.r):
        f_hist[:, d] = (farr == d).sum(axis=0)
    ok = (a_hist[:, None, :] >= f_hist[None, :, :]).all(axis=2).any(axis=1)
    return [int(x) for x in np.flatnonzero(ok)]


def _variants(F: RMatrix, base: int) -> list[tuple[np.ndarray, np.ndarray, tuple[int, ...]]]:
    """Distinct requirement vectors over all placements of F's rows.

    A placement ``pi`` sends F-row ``i`` to position ``pi[i]`` of a sorted
    row subset.  Returns ``(codes, mults, pi)`` triples, one per distinct
    requirement multiset.
    """
    n = F.m
    seen = {}
    for pi in itertools.permutations(range(n)):
        need = Counter()
        for col in F.cols:
            code = 0
            for i in range(n):
                code += col[i] * base ** pi[i]
            need[code] += 1
        key = tuple(sorted(need.items()))
        if key not in seen:
            codes = np.array([k for k, _ in key], dtype=np.int64)
            mults = np.array([v for _, v in key], dtype=np.int64)
            seen[key] = (codes, mults, pi)
    return list(seen.values())


def _pattern_counts(codes: np.ndarray, space: int) -> np.ndarray | dict:
    if space <= _DIRECT_ADDRESS_LIMIT:
        return np.bincount(codes, minlength=space)
    vals, cnts = np.unique(codes, return_counts=True)
    return dict(zip(vals.tolist(), cnts.tolist()))


def _satisfied(counts, codes: np.ndarray, mults: np.ndarray) -> bool:
    if isinstance(counts, dict):
        return all(counts.get(int(c), 0) >= int(k) for c, k in zip(codes, mults))
    return bool((counts[codes] >= mults).all())


def _trivial(A: RMatrix, F: RMatrix) -> bool | None:
    if F.n == 0:
        return True  # vacuous containment of the empty configuration
    if F.m > A.m or F.n > A.n:
        return False
    if F.m == 0:
        return True
    return None


def _placements(A: RMatrix, F: RMatrix):
    """Yield ``(S, counts, codes_of_A, variants)`` for every eligible sorted row subset."""
    base = max(A.r, F.r)
    n = F.m
    weights = base ** np.arange(n, dtype=np.int64)
    variants = _variants(F, base)
    rows = _eligible_rows(A, F, base)
    arr = A.array.astype(np.int64)
    for S in itertools.combinations(rows, n):
        codes = arr[:, S] @ weights
        counts = _pattern_counts(codes, base**n)
        yield S, counts, codes, variants


def contains(A: RMatrix, F: RMatrix) -> bool:
    """True iff some row and column permutation of F is a submatrix of A."""
    t = _trivial(A, F)
    if t is not None:
        return t
    for _S, counts, _codes, variants in _placements(A, F):
        for fcodes, mults, _pi in variants:
            if _satisfied(counts, fcodes, mults):
                return True
    return False


def contains_with_column(A: RMatrix, F: RMatrix, j: int) -> bool:
    """True iff some copy of F in A uses column ``j`` of A."""
    if not 0 <= j < A.n:
        raise MatrixError(f"column index {j} out of range for {A.n} columns")
    if F.n == 0:
        return False
    t = _trivial(A, F)
    if t is not None:
        return t and F.m == 0
    for _S, counts, codes, variants in _placements(A, F):
        cj = int(codes[j])
        for fcodes, mults, _pi in variants:
            if cj in fcodes and _satisfied(counts, fcodes, mults):
                return True
    return False


def witness(A: RMatrix, F: RMatrix) -> Witness | None:
    """First witness over ordered row tuples of A in lexicographic order."""
    if F.n == 0:
        return Witness(tuple(range(F.m)) if F.m <= A.m else (), ())
    if _trivial(A, F) is False:
        return None
    if F.m == 0:
        return Witness((), tuple(range(F.n)))
    base = max(A.r, F.r)
    weights = base ** np.arange(F.m, dtype=np.int64)
    arr = A.array.astype(np.int64)
    fcodes = F.array.astype(np.int64) @ weights
    need = Counter(fcodes.tolist())
    eligible = set(_eligible_rows(A, F, base))
    for t in itertools.permutations(range(A.m), F.m):
        if not eligible.issuperset(t):
            continue
        codes = (arr[:, t] @ weights).tolist()
        have = Counter(codes)
        if any(have[c] < k for c, k in need.items()):
            continue
        pools: dict[int, list[int]] = {}
        for idx, c in enumerate(codes):
            pools.setdefault(c, []).append(idx)
        taken = {c: 0 for c in need}
        col_map = []
        for c in fcodes.tolist():
            col_map.append(pools[c][taken[c]])
            taken[c] += 1
        return Witness(tuple(t), tuple(col_map))
    return None


def avoids(A: RMatrix, F: RMatrix) -> bool:
    return not contains(A, F)
