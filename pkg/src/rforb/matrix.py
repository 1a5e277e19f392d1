"""Configurations over the alphabet {0, ..., r-1}.

An :class:`RMatrix` is an ``m``-rowed multiset of columns.  Columns are kept
sorted lexicographically so that two matrices describing the same
configuration up to column order compare equal.  Row indices are 0-based in
the Python API; the text format and JSON outputs use 1-based rows.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

Column = tuple[int, ...]


class MatrixError(ValueError):
    """Raised for malformed matrices or out-of-range parameters."""


class ParseError(MatrixError):
    def __init__(self, message: str, line: int, col: int | None = None):
        where = f"line {line}" if col is None else f"line {line}, column {col}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class RMatrix:
    m: int
    r: int
    cols: tuple[Column, ...] = field(default=())

    def __post_init__(self):
        if self.r < 2:
            raise MatrixError(f"alphabet size r must be >= 2, got {self.r}")
        if self.m < 0:
            raise MatrixError(f"row count must be >= 0, got {self.m}")
        cols = []
        for j, c in enumerate(self.cols):
            c = tuple(int(x) for x in c)
            if len(c) != self.m:
                raise MatrixError(f"column {j} has length {len(c)}, expected {self.m}")
            for x in c:
                if not 0 <= x < self.r:
                    raise MatrixError(f"digit {x} in column {j} out of range for r={self.r}")
            cols.append(c)
        cols.sort()
        object.__setattr__(self, "cols", tuple(cols))

    def __len__(self) -> int:
        return len(self.cols)

    def __iter__(self):
        return iter(self.cols)

    def __contains__(self, col) -> bool:
        return tuple(col) in self.colset

    def __str__(self) -> str:
        if not self.cols:
            return f"<{self.m}x0 r={self.r}>"
        return "\n".join(" ".join(str(c[i]) for c in self.cols) for i in range(self.m))

    @property
    def n(self) -> int:
        return len(self.cols)

    @cached_property
    def colset(self) -> frozenset[Column]:
        return frozenset(self.cols)

    @cached_property
    def multiplicities(self) -> Counter:
        return Counter(self.cols)

    @property
    def is_simple(self) -> bool:
        return len(self.colset) == len(self.cols)

    @property
    def is_binary(self) -> bool:
        return all(x < 2 for c in self.cols for x in c)

    @cached_property
    def array(self) -> np.ndarray:
        """Columns as an ``(n, m)`` uint8 array (one column per array row)."""
        return np.array(self.cols, dtype=np.uint8).reshape(len(self.cols), self.m)

    def rows(self) -> list[tuple[int, ...]]:
        return [tuple(c[i] for c in self.cols) for i in range(self.m)]

    def with_alphabet(self, r: int) -> RMatrix:
        return RMatrix(self.m, r, self.cols)

    def add_columns(self, cols: Iterable[Sequence[int]]) -> RMatrix:
        return RMatrix(self.m, self.r, self.cols + tuple(tuple(c) for c in cols))

    def permute_rows(self, perm: Sequence[int]) -> RMatrix:
        """Row ``i`` of the result is row ``perm[i]`` of ``self``."""
        return RMatrix(self.m, self.r, [tuple(c[p] for p in perm) for c in self.cols])

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], r: int = 2) -> RMatrix:
        rows = [list(row) for row in rows]
        if not rows:
            return cls(0, r, ())
        widths = {len(row) for row in rows}
        if len(widths) != 1:
            raise MatrixError("rows have different lengths")
        return cls(len(rows), r, list(zip(*rows)))


def new_matrix(m: int, r: int, cols: Iterable[Sequence[int]]) -> RMatrix:
    return RMatrix(m, r, tuple(tuple(c) for c in cols))


def support(A: RMatrix) -> RMatrix:
    """The underlying simple configuration: every distinct column once."""
    return RMatrix(A.m, A.r, sorted(A.colset))


def restrict(A: RMatrix, rows: Iterable[int]) -> RMatrix:
    """Keep only the given rows (0-based, taken in increasing order)."""
    idx = sorted(set(rows))
    for i in idx:
        if not 0 <= i < A.m:
            raise MatrixError(f"row index {i} out of range for m={A.m}")
    return RMatrix(len(idx), A.r, [tuple(c[i] for i in idx) for c in A.cols])


def complement01(F: RMatrix) -> RMatrix:
    if not F.is_binary:
        raise MatrixError("complement01 requires a (0,1)-matrix")
    return RMatrix(F.m, F.r, [tuple(1 - x for x in c) for c in F.cols])


def multiply(p: int, F: RMatrix) -> RMatrix:
    """``p * F``: every column repeated ``p`` times."""
    if p < 1:
        raise MatrixError(f"multiplier must be >= 1, got {p}")
    return RMatrix(F.m, F.r, [c for c in F.cols for _ in range(p)])


def is_p_simple(F: RMatrix, p: int) -> bool:
    if p < 1:
        raise MatrixError(f"p must be >= 1, got {p}")
    return max(F.multiplicities.values(), default=0) <= p


@dataclass(frozen=True)
class TwoRowSpec:
    """Multiplicities of (0,0), (1,0), (0,1), (1,1) in a 2-rowed (0,1)-configuration."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if min(self.a, self.b, self.c, self.d) < 0:
            raise MatrixError("column counts must be nonnegative")
        if self.a + self.b + self.c + self.d < 1:
            raise MatrixError("a+b+c+d must be >= 1")

    @property
    def b_prime(self) -> int:
        return min(self.b, self.c)

    @property
    def alpha(self) -> int:
        return max(self.a, self.d, min(self.b, self.c))

    @property
    def max_count(self) -> int:
        return max(self.a, self.b, self.c, self.d)

    def balanced(self) -> TwoRowSpec:
        bp = self.b_prime
        return TwoRowSpec(self.a, bp, bp, self.d)

    @classmethod
    def parse(cls, text: str) -> TwoRowSpec:
        parts = [int(x) for x in text.replace(" ", "").split(",")]
        if len(parts) != 4:
            raise MatrixError(f"expected a,b,c,d, got {text!r}")
        return cls(*parts)


# -- named configurations ---------------------------------------------------


def build_Kk(k: int) -> RMatrix:
    """All ``2**k`` binary columns of length ``k``."""
    if k < 0:
        raise MatrixError(f"k must be >= 0, got {k}")
    return RMatrix(k, 2, list(itertools.product((0, 1), repeat=k)))


def build_Kks(k: int, s: int) -> RMatrix:
    """All binary columns of length ``k`` with exactly ``s`` ones."""
    if not 0 <= s <= k:
        raise MatrixError(f"need 0 <= s <= k, got k={k}, s={s}")
    return RMatrix(k, 2, [c for c in itertools.product((0, 1), repeat=k) if sum(c) == s])


def build_identity(k: int) -> RMatrix:
    return build_Kks(k, 1)


def build_block(a: int, b: int, p: int = 1) -> RMatrix:
    """``p`` copies of the column with ``a`` zeros above ``b`` ones."""
    if a < 0 or b < 0 or a + b < 1:
        raise MatrixError(f"need a, b >= 0 and a+b >= 1, got a={a}, b={b}")
    if p < 1:
        raise MatrixError(f"p must be >= 1, got {p}")
    return RMatrix(a + b, 2, [(0,) * a + (1,) * b] * p)


def build_F(spec: TwoRowSpec | Sequence[int]) -> RMatrix:
    if not isinstance(spec, TwoRowSpec):
        spec = TwoRowSpec(*spec)
    cols = [(0, 0)] * spec.a + [(1, 0)] * spec.b + [(0, 1)] * spec.c + [(1, 1)] * spec.d
    return RMatrix(2, 2, cols)


def zero_rows_matrix(r: int = 2, n: int = 1) -> RMatrix:
    """The 0-rowed matrix with ``n`` empty columns."""
    return RMatrix(0, r, [()] * n)


def all_columns(m: int, r: int) -> list[Column]:
    """Every column of ``{0..r-1}^m`` in lexicographic order."""
    return list(itertools.product(range(r), repeat=m))


def row_permutation_canon(A: RMatrix) -> RMatrix:
    """Least column-sorted image of ``A`` over all row permutations."""
    best = None
    for perm in itertools.permutations(range(A.m)):
        cand = tuple(sorted(tuple(c[p] for p in perm) for c in A.cols))
        if best is None or cand < best:
            best = cand
    return RMatrix(A.m, A.r, best or ())


# -- text format ------------------------------------------------------------


def format_matrix(A: RMatrix) -> str:
    lines = [f"{A.m} {A.n} {A.r}"]
    for i in range(A.m):
        lines.append(" ".join(str(c[i]) for c in A.cols))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> RMatrix:
    """Parse the ``m n r`` header format; ``#`` starts a comment line."""
    lines = [(no, ln.strip()) for no, ln in enumerate(text.splitlines(), 1)]
    lines = [(no, ln) for no, ln in lines if not ln.startswith("#")]
    content = [(no, ln) for no, ln in lines if ln]
    if not content:
        raise ParseError("missing header", 1)
    hno, header = content[0]
    fields = header.split()
    if len(fields) != 3:
        raise ParseError(f"header must be 'm n r', got {header!r}", hno)
    try:
        m, n, r = (int(x) for x in fields)
    except ValueError:
        raise ParseError(f"non-integer header {header!r}", hno) from None
    if r < 2 or m < 0 or n < 0:
        raise ParseError(f"invalid header values m={m} n={n} r={r}", hno)
    body = content[1:]
    if n == 0:
        body = []
    if len(body) != (m if n else 0):
        raise ParseError(f"expected {m} rows, found {len(body)}", body[-1][0] if body else hno)
    rows = []
    for no, ln in body:
        toks = ln.split()
        if len(toks) != n:
            raise ParseError(f"expected {n} digits, found {len(toks)}", no)
        row = []
        for j, tok in enumerate(toks, 1):
            if not tok.isdigit() or int(tok) >= r:
                raise ParseError(f"bad digit {tok!r} for r={r}", no, j)
            row.append(int(tok))
        rows.append(row)
    cols = [tuple(rows[i][j] for i in range(m)) for j in range(n)]
    return RMatrix(m, r, cols)


def read_matrix(path) -> RMatrix:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def write_matrix(A: RMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_matrix(A))
