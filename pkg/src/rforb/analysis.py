"""Tournaments of I_2-avoiders, reduction rewrites and mark counting."""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from .containment import contains
from .formulas import stability_bound_value
from .matrix import MatrixError, RMatrix, TwoRowSpec, build_F, build_identity, restrict


class PreconditionError(MatrixError):
    pass


@dataclass(frozen=True)
class Tournament:
    m: int
    arcs: frozenset[tuple[int, int]]

    def __post_init__(self):
        pairs = Counter(frozenset(a) for a in self.arcs)
        for u, v in self.arcs:
            if u == v or not (0 <= u < self.m and 0 <= v < self.m):
                raise MatrixError(f"bad arc {(u, v)}")
        if len(pairs) != self.m * (self.m - 1) // 2 or any(n != 1 for n in pairs.values()):
            raise MatrixError("a tournament needs exactly one arc per pair of vertices")

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arcs

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "arcs": [[u + 1, v + 1] for u, v in sorted(self.arcs)],
            "transitive": is_transitive(self),
        }


def tournament_of(A: RMatrix) -> Tournament:
    """Arc i->j when no column has 0 in row i and 1 in row j; ties go from the upper row."""
    arcs = set()
    for i, j in itertools.combinations(range(A.m), 2):
        blocked_ij = any(c[i] == 0 and c[j] == 1 for c in A.cols)
        blocked_ji = any(c[j] == 0 and c[i] == 1 for c in A.cols)
        if not blocked_ij:
            arcs.add((i, j))
        elif not blocked_ji:
            arcs.add((j, i))
        else:
            raise PreconditionError(f"rows {i} and {j} carry I_2; no tournament arc exists")
    return Tournament(A.m, frozenset(arcs))


def is_transitive(T: Tournament) -> bool:
    for a, b, c in itertools.combinations(range(T.m), 3):
        if T.has_arc(a, b) and T.has_arc(b, c) and T.has_arc(c, a):
            return False
        if T.has_arc(b, a) and T.has_arc(c, b) and T.has_arc(a, c):
            return False
    return True


def stability_bound(m: int, r: int) -> int:
    """Size cap for I_2-avoiders whose tournament is not transitive."""
    return stability_bound_value(m, r)


# -- reduction rewrites -------------------------------------------------------


def _hosting_pairs(A: RMatrix, Fp: RMatrix):
    for i, j in itertools.combinations(range(A.m), 2):
        if contains(restrict(A, (i, j)), Fp):
            yield i, j


def reduce_r_gt_3(A: RMatrix, spec: TwoRowSpec, r: int | None = None) -> RMatrix:
    """Equal-size rewrite of an F(a,b,c,d)-avoider into an F(a,b',b',d)-avoider, r > 3.

    While some row pair (i, j) hosts F(a,b',b',d), its columns showing
    (0,1) or (1,0) on (i, j) are replaced by as many fresh columns that are
    0 on i, 1 on j and non-binary elsewhere.
    """
    r = A.r if r is None else r
    if r != A.r:
        raise PreconditionError(f"alphabet mismatch: matrix has r={A.r}, asked r={r}")
    if r <= 3:
        raise PreconditionError("needs r > 3")
    if spec.b < 1 or spec.c < 1:
        raise PreconditionError("needs b, c >= 1")
    m = A.m
    if m >= 2 and (r - 2) ** (m - 2) < 2 * (max(spec.b, spec.c) - 1):
        raise PreconditionError("needs (r-2)^(m-2) >= 2(max{b,c}-1)")
    if not A.is_simple:
        raise PreconditionError("matrix must be simple")
    if contains(A, build_F(spec)):
        raise PreconditionError("matrix contains F(a,b,c,d)")
    Fp = build_F(spec.balanced())
    cols = list(A.cols)
    for _ in range(m * (m - 1) // 2 + 1):
        cur = RMatrix(m, r, cols)
        pair = next(_hosting_pairs(cur, Fp), None)
        if pair is None:
            return cur
        i, j = pair
        keep = [c for c in cols if {c[i], c[j]} != {0, 1}]
        need = len(cols) - len(keep)
        rest = [x for x in range(m) if x not in (i, j)]
        fresh = []
        for fill in itertools.product(range(2, r), repeat=len(rest)):
            col = [0] * m
            col[j] = 1
            for x, v in zip(rest, fill):
                col[x] = v
            fresh.append(tuple(col))
            if len(fresh) == need:
                break
        if len(fresh) < need:
            raise PreconditionError("ran out of replacement columns")
        cols = keep + fresh
    raise AssertionError("rewrite did not terminate")


_CHAINS = [
    # (source digits on the pair, target digits on the pair)
    ((0, 0), (0, 2)),
    ((0, 0), (2, 0)),
    ((0, 2), (2, 2)),
    ((2, 0), (2, 2)),
    ((1, 1), (1, 2)),
    ((1, 1), (2, 1)),
    ((1, 2), (2, 2)),
    ((2, 1), (2, 2)),
]


def ternary_blocks(A: RMatrix, pair: tuple[int, int]) -> dict[tuple[int, int], set]:
    """Column sets over the other rows, keyed by the digits on ``pair``."""
    i, j = pair
    rest = [x for x in range(A.m) if x not in pair]
    blocks: dict[tuple[int, int], set] = {(u, v): set() for u in range(3) for v in range(3)}
    for c in A.cols:
        blocks[(c[i], c[j])].add(tuple(c[x] for x in rest))
    return blocks


def chains_hold(A: RMatrix, pair: tuple[int, int]) -> bool:
    blocks = ternary_blocks(A, pair)
    return all(blocks[src] <= blocks[dst] for src, dst in _CHAINS)


def normalize_ternary(A: RMatrix, spec: TwoRowSpec, pair: tuple[int, int] | None = None) -> RMatrix:
    """Push binary digits on a hosting pair to 2 until the block inclusion chains hold (r = 3)."""
    if A.r != 3:
        raise PreconditionError("needs r = 3")
    if not A.is_simple:
        raise PreconditionError("matrix must be simple")
    if contains(A, build_F(spec)):
        raise PreconditionError("matrix contains F(a,b,c,d)")
    Fp = build_F(spec.balanced())
    if pair is None:
        pair = next(_hosting_pairs(A, Fp), None)
        if pair is None:
            raise PreconditionError("no row pair hosts F(a,b',b',d)")
    else:
        pair = tuple(sorted(pair))
        if not contains(restrict(A, pair), Fp):
            raise PreconditionError(f"rows {pair} do not host F(a,b',b',d)")
    i, j = pair
    cols = set(A.cols)
    changed = True
    while changed:
        changed = False
        for src, dst in _CHAINS:
            for c in sorted(cols):
                if (c[i], c[j]) != src:
                    continue
                t = list(c)
                t[i], t[j] = dst
                t = tuple(t)
                if t not in cols:
                    cols.remove(c)
                    cols.add(t)
                    changed = True
    return RMatrix(A.m, 3, cols)


# -- marks --------------------------------------------------------------------


@dataclass
class MarkTable:
    counts: dict = field(default_factory=dict)
    column_marks: list[int] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def max_per_key(self) -> int:
        return max(self.counts.values(), default=0)

    def to_json(self) -> dict:
        def key(k):
            if isinstance(k[0], tuple):
                return {"X": [x + 1 for x in k[0]], "Y": [y + 1 for y in k[1]]}
            return {"pair": [k[0] + 1, k[1] + 1]}

        return {
            "entries": [{**key(k), "marks": v} for k, v in sorted(self.counts.items())],
            "total": self.total,
            "max": self.max_per_key,
            "column_marks": self.column_marks,
        }


def decompose(A: RMatrix, baseline: RMatrix) -> list:
    """Columns of A left over after removing one copy of each baseline column."""
    rest = Counter(A.cols)
    rest.subtract(Counter(baseline.cols))
    if any(v < 0 for v in rest.values()):
        raise PreconditionError("baseline is not a subconfiguration of A")
    return sorted(rest.elements())


def mark_pairs_I2(A: RMatrix, baseline: RMatrix) -> MarkTable:
    """Marks on row pairs from the columns of A outside ``baseline``.

    The pattern counted on a pair is the one the baseline's tournament says
    is absent there (0 on the tail, 1 on the head of the arc).
    """
    if contains(baseline, build_identity(2)):
        raise PreconditionError("baseline must avoid I_2")
    T = tournament_of(baseline)
    extra = decompose(A, baseline)
    table = MarkTable({pair: 0 for pair in itertools.combinations(range(A.m), 2)})
    for c in extra:
        n = 0
        for u, v in T.arcs:
            if c[u] == 0 and c[v] == 1:
                table.counts[(min(u, v), max(u, v))] += 1
                n += 1
        table.column_marks.append(n)
    return table


def mark_blocks(A: RMatrix, a: int, b: int) -> MarkTable:
    """Marks on disjoint (X, Y), |X| = a, |Y| = b, from columns zero on X and one on Y."""
    m = A.m
    if a < 0 or b < 0 or a + b > m:
        raise MatrixError("needs a, b >= 0 and a+b <= m")
    table = MarkTable()
    for X in itertools.combinations(range(m), a):
        others = [i for i in range(m) if i not in X]
        for Y in itertools.combinations(others, b):
            table.counts[(X, Y)] = 0
    for c in A.cols:
        zeros = [i for i in range(m) if c[i] == 0]
        ones = [i for i in range(m) if c[i] == 1]
        n = 0
        for X in itertools.combinations(zeros, a):
            for Y in itertools.combinations(ones, b):
                table.counts[(X, Y)] += 1
                n += 1
        table.column_marks.append(n)
    return table


def split_rare_patterns(A: RMatrix, cap: int = 2) -> tuple[RMatrix, RMatrix]:
    """Split A into (B, C): C gathers, per row pair, the columns showing the rarer of
    [0;1] / [1;0] when it occurs at most ``cap`` times, so B avoids I_2 when every
    pair has such a rare pattern.
    """
    moved = set()
    for i, j in itertools.combinations(range(A.m), 2):
        up = [c for c in A.colset if c[i] == 0 and c[j] == 1]
        down = [c for c in A.colset if c[i] == 1 and c[j] == 0]
        rare = up if len(up) <= len(down) else down
        if len(rare) > cap:
            raise PreconditionError(f"rows {i} and {j} show both patterns more than {cap} times")
        moved.update(rare)
    B = [c for c in A.cols if c not in moved]
    C = [c for c in A.cols if c in moved]
    return RMatrix(A.m, A.r, B), RMatrix(A.m, A.r, C)
