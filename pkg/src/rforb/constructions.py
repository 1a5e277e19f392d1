"""Explicit avoiders realising the extremal values.

Row ``i`` is *above* row ``j`` when ``i < j``.  Where a construction leaves
freedom in the appended columns, the lexicographically smallest choices are
taken, so every output is deterministic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

from .formulas import C, ternary_log_slack
from .matrix import (
    MatrixError,
    RMatrix,
    all_columns,
    build_block,
    build_identity,
    build_Kk,
    build_Kks,
    multiply,
    restrict,
    support,
)
from .containment import contains


class HypothesisError(MatrixError):
    """Parameters outside the range where a construction exists."""


def _has_ones_above_zeros(col, s: int, k: int) -> bool:
    """True iff some ``s`` rows holding 1 all lie above ``k - s`` rows holding 0."""
    m = len(col)
    ones_prefix = [0] * (m + 1)
    for i, x in enumerate(col):
        ones_prefix[i + 1] = ones_prefix[i] + (x == 1)
    zeros_suffix = [0] * (m + 1)
    for i in range(m - 1, -1, -1):
        zeros_suffix[i] = zeros_suffix[i + 1] + (col[i] == 0)
    return any(ones_prefix[t] >= s and zeros_suffix[t] >= k - s for t in range(m + 1))


# -- binary sequences and lifting -------------------------------------------


@dataclass(frozen=True)
class BinarySequenceSpec:
    """A rule ``k -> A_k`` giving a k-rowed binary avoider; ``A_0`` is one empty column."""

    name: str
    generator: Callable[[int], RMatrix]

    def __call__(self, k: int) -> RMatrix:
        if k == 0:
            return RMatrix(0, 2, [()])
        return support(self.generator(k))


def _binary_filter(pred) -> Callable[[int], RMatrix]:
    return lambda k: RMatrix(k, 2, [c for c in itertools.product((0, 1), repeat=k) if pred(c)])


def seq_at_most_zeros(t: int) -> BinarySequenceSpec:
    return BinarySequenceSpec(f"at-most-{t}-zeros", _binary_filter(lambda c: c.count(0) <= t))


def seq_no_ones_above_zeros(k: int, s: int) -> BinarySequenceSpec:
    return BinarySequenceSpec(
        f"no-{s}-ones-above-{k - s}-zeros", _binary_filter(lambda c: not _has_ones_above_zeros(c, s, k))
    )


def _zero_identity_one(k: int) -> RMatrix:
    cols = [(0,) * k, (1,) * k] + [tuple(int(i == j) for i in range(k)) for j in range(k)]
    return RMatrix(k, 2, cols)


def _triangular_union(k: int) -> RMatrix:
    upper = [tuple(int(i <= j) for i in range(k)) for j in range(k)]
    ident_c = [tuple(int(i != j) for i in range(k)) for j in range(k)]
    return RMatrix(k, 2, upper + ident_c + [(0,) * k])


SEQ_ZERO_IDENTITY_ONE = BinarySequenceSpec("zero-identity-one", _zero_identity_one)
SEQ_TRIANGULAR_UNION = BinarySequenceSpec("triangular-union", _triangular_union)


def named_sequence(name: str, **params) -> BinarySequenceSpec:
    if name == "zero-identity-one":
        return SEQ_ZERO_IDENTITY_ONE
    if name == "triangular-union":
        return SEQ_TRIANGULAR_UNION
    if name == "i2":
        return seq_no_ones_above_zeros(2, 1)
    if name == "complete":
        return seq_at_most_zeros(params["k"] - 1)
    if name == "complete-uniform":
        return seq_no_ones_above_zeros(params["k"], params["s"])
    raise ValueError(f"unknown sequence {name!r}")


def check_sequence(seq: BinarySequenceSpec, F: RMatrix, kmax: int) -> list[str]:
    """Problems with ``seq`` as lifting data for F up to ``kmax`` rows."""
    problems = []
    n = F.m
    An = seq(n)
    for k in range(1, kmax + 1):
        Ak = seq(k)
        if contains(Ak, F):
            problems.append(f"A_{k} contains F")
        if k >= n:
            for S in itertools.combinations(range(k), n):
                extra = support(restrict(Ak, S)).colset - An.colset
                if extra:
                    problems.append(f"A_{k} restricted to rows {S} leaves A_{n}")
                    break
    return problems


def lift_binary_sequence(m: int, r: int, seq: BinarySequenceSpec) -> RMatrix:
    """Every column carrying a column of ``A_k`` on some k-set of rows and digits >= 2 elsewhere."""
    if r < 3:
        raise HypothesisError("lifting needs r >= 3")
    cols = []
    for k in range(m + 1):
        Ak = seq(k)
        for X in itertools.combinations(range(m), k):
            rest = [i for i in range(m) if i not in X]
            for a in Ak.cols:
                for fill in itertools.product(range(2, r), repeat=m - k):
                    col = [0] * m
                    for i, x in zip(X, a):
                        col[i] = x
                    for i, x in zip(rest, fill):
                        col[i] = x
                    cols.append(tuple(col))
    return RMatrix(m, r, cols)


def lift_size(m: int, r: int, seq: BinarySequenceSpec) -> int:
    return sum(C(m, k) * (r - 2) ** (m - k) * len(seq(k)) for k in range(m + 1))


# -- complete and complete-uniform families -----------------------------------


def _appended(m: int, X, fixed: dict[int, int], alphabets: dict[int, tuple[int, ...]], count: int):
    """The ``count`` lexicographically smallest columns with ``fixed`` entries and free rows drawn from ``alphabets``."""
    free = sorted(alphabets)
    out = []
    for vals in itertools.product(*(alphabets[i] for i in free)):
        col = [0] * m
        for i, x in fixed.items():
            col[i] = x
        for i, x in zip(free, vals):
            col[i] = x
        out.append(tuple(col))
        if len(out) == count:
            break
    return out


def _check_basic(m, r, k, p):
    if m < 0 or r < 2 or k < 0 or p < 1:
        raise MatrixError(f"invalid parameters m={m} r={r} k={k} p={p}")


def construct_Kk_avoider(m: int, r: int, k: int, p: int = 1) -> RMatrix:
    """Columns with at most k-1 zeros, plus p-1 columns zero exactly on each k-set."""
    _check_basic(m, r, k, p)
    if p > 1 and m >= k and (r - 1) ** (m - k) < p - 1:
        raise HypothesisError("needs (r-1)^(m-k) >= p-1")
    cols = [c for c in all_columns(m, r) if c.count(0) <= k - 1]
    if p > 1:
        for X in itertools.combinations(range(m), k):
            alph = {i: tuple(range(1, r)) for i in range(m) if i not in X}
            cols += _appended(m, X, {i: 0 for i in X}, alph, p - 1)
    return RMatrix(m, r, cols)


def construct_Kks_avoider(m: int, r: int, k: int, s: int, p: int = 1) -> RMatrix:
    """Columns without s ones above k-s zeros, plus p-1 columns per k-set with that pattern and digits >= 2 elsewhere."""
    _check_basic(m, r, k, p)
    if not 0 <= s <= k:
        raise MatrixError("needs 0 <= s <= k")
    if p > 1 and m >= k and (r - 2) ** (m - k) < p - 1:
        raise HypothesisError("needs (r-2)^(m-k) >= p-1")
    cols = [c for c in all_columns(m, r) if not _has_ones_above_zeros(c, s, k)]
    if p > 1:
        for X in itertools.combinations(range(m), k):
            fixed = {x: (1 if t < s else 0) for t, x in enumerate(X)}
            alph = {i: tuple(range(2, r)) for i in range(m) if i not in X}
            cols += _appended(m, X, fixed, alph, p - 1)
    return RMatrix(m, r, cols)


def _ternary_rule(m: int, X: tuple[int, ...], s: int):
    """Fixed entries and free alphabets of the appended ternary columns for k-set X."""
    k = len(X)
    top = X[s - 1] if s >= 1 else -1
    bottom = X[s] if s < k else m
    Xs = set(X)
    fixed, alph = {}, {}
    for i in range(m):
        if i <= top:
            if i in Xs:
                fixed[i] = 1
            else:
                alph[i] = (0, 2)
        elif i < bottom:
            fixed[i] = 2
        elif i in Xs:
            fixed[i] = 0
        else:
            alph[i] = (1, 2)
    return fixed, alph


def ternary_free_rows(m: int, X: tuple[int, ...], s: int) -> int:
    return len(_ternary_rule(m, X, s)[1])


def construct_ternary_pKks(m: int, k: int, s: int, p: int) -> RMatrix:
    """Ternary avoider of p*K_k^s: the no-(s ones above k-s zeros) base plus p-1 ruled columns per eligible k-set.

    A k-set is eligible when its rule leaves at least ``ceil(log2(p-1))``
    free rows, i.e. ``2**free >= p-1`` distinct columns exist.
    """
    if p < 2:
        raise MatrixError("needs p >= 2")
    if not 0 <= s <= k or m < k:
        raise MatrixError("needs 0 <= s <= k <= m")
    a = ternary_log_slack(p)
    cols = [c for c in all_columns(m, 3) if not _has_ones_above_zeros(c, s, k)]
    for X in itertools.combinations(range(m), k):
        fixed, alph = _ternary_rule(m, X, s)
        if len(alph) >= a:
            cols += _appended(m, X, fixed, alph, p - 1)
    return RMatrix(m, 3, cols)


def ternary_pKks_size(m: int, k: int, s: int, p: int) -> int:
    """Exact column count of :func:`construct_ternary_pKks` by counting eligible k-sets."""
    a = ternary_log_slack(p)
    base = sum(C(m, i) * 2 ** (m - i) for i in range(min(k, m + 1)))
    # free rows = (m - k) minus the non-X rows strictly between the s-th and (s+1)-th rows of X
    eligible = sum(C(f + k - 1, k - 1) for f in range(a, m - k + 1)) if k else 1
    return base + (p - 1) * eligible


# -- identity family ----------------------------------------------------------


def _no_zero_above_one(c) -> bool:
    seen_zero = False
    for x in c:
        if x == 0:
            seen_zero = True
        elif x == 1 and seen_zero:
            return False
    return True


def construct_I2_extremal(m: int, r: int) -> RMatrix:
    """All columns in which no 0 lies above a 1."""
    if r < 2 or m < 0:
        raise MatrixError("invalid parameters")
    return RMatrix(m, r, [c for c in all_columns(m, r) if _no_zero_above_one(c)])


def construct_3I2_ternary(m: int) -> RMatrix:
    if m < 4:
        raise HypothesisError("needs m >= 4")
    A = construct_ternary_pKks(m, 2, 1, 3)
    extra = (1,) + (2,) * (m - 2) + (0,)
    if extra in A.colset:
        raise AssertionError("corner column already present")
    return A.add_columns([extra])


# -- blocks -------------------------------------------------------------------


def construct_block_avoider(m: int, r: int, a: int, b: int, p: int = 1) -> RMatrix:
    """Avoider of p copies of the a-zeros-over-b-ones column."""
    if a < 0 or b < 0 or a + b < 1 or p < 1:
        raise MatrixError("needs a, b >= 0, a+b >= 1, p >= 1")
    if a + b > m:
        raise HypothesisError("needs a+b <= m")
    if p > 1 and (r - 2) ** (m - a - b) < p - 1:
        raise HypothesisError("needs (r-2)^(m-a-b) >= p-1")
    cols = [c for c in all_columns(m, r) if c.count(0) < a or c.count(1) < b]
    if p > 1:
        for X in itertools.combinations(range(m), a):
            others = [i for i in range(m) if i not in X]
            for Y in itertools.combinations(others, b):
                fixed = {**{i: 0 for i in X}, **{i: 1 for i in Y}}
                alph = {i: tuple(range(2, r)) for i in range(m) if i not in fixed}
                cols += _appended(m, X, fixed, alph, p - 1)
    return RMatrix(m, r, cols)


# -- three-rowed lifts --------------------------------------------------------

THREE_ROW_VARIANTS = {
    "zero-identity-one": SEQ_ZERO_IDENTITY_ONE,
    "triangular-union": SEQ_TRIANGULAR_UNION,
}


def construct_3row(m: int, r: int, variant: str) -> RMatrix:
    try:
        seq = THREE_ROW_VARIANTS[variant]
    except KeyError:
        raise ValueError(f"unknown variant {variant!r}") from None
    if m < 0 or r < 2:
        raise MatrixError("invalid parameters")
    if r == 2:
        # only the k = m term of the lift survives
        return seq(m).with_alphabet(2)
    return lift_binary_sequence(m, r, seq)


# -- targets ------------------------------------------------------------------

F_011 = RMatrix.from_rows([[0], [1], [1]])
F_3x2_A = RMatrix.from_rows([[1, 1], [0, 1], [0, 0]])
F_3x2_B = RMatrix.from_rows([[1, 0], [0, 1], [0, 0]])
F_3x4_B = RMatrix.from_rows([[1, 0, 1, 0], [0, 1, 1, 1], [0, 0, 0, 1]])
F_OPEN_3x2 = RMatrix.from_rows([[1, 0], [0, 1], [0, 1]])


def targets(family: str, **p) -> list[RMatrix]:
    """The configurations a constructor family is claimed to avoid."""
    if family == "kk":
        return [multiply(p["p"], build_Kk(p["k"]))]
    if family in ("kks", "ternary-pkks"):
        return [multiply(p["p"], build_Kks(p["k"], p["s"]))]
    if family == "i2":
        return [build_identity(2)]
    if family == "3i2":
        return [multiply(3, build_identity(2))]
    if family == "block":
        return [build_block(p["a"], p["b"], p["p"])]
    if family == "3row":
        if p["variant"] == "zero-identity-one":
            return [F_011, F_3x2_A]
        return [F_3x2_B, F_3x4_B]
    raise ValueError(f"unknown family {family!r}")
