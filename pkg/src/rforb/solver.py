"""Exact forbidden numbers by branch-and-bound over all ``r**m`` columns."""
from __future__ import annotations

import itertools
import math
import os
import random
import time
from dataclasses import dataclass, field

import numpy as np

from .kernels import DEFAULT_BACKEND, get_backend
from .matrix import MatrixError, RMatrix, all_columns, format_matrix, row_permutation_canon

DEFAULT_MAX_CANDIDATES = 10**4


class CandidateSpaceTooLarge(ValueError):
    pass


class SearchIncomplete(RuntimeError):
    """A search that must be exhaustive ran out of budget."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class SearchBudget:
    nodes: int = 10**8
    seconds: float = 300.0

    @classmethod
    def from_env(cls) -> SearchBudget:
        nodes = os.environ.get("RFORB_BUDGET_NODES")
        secs = os.environ.get("RFORB_BUDGET_SECS")
        return cls(
            nodes=int(nodes) if nodes else cls.nodes,
            seconds=float(secs) if secs else cls.seconds,
        )


@dataclass
class SearchReport:
    m: int
    r: int
    pattern: RMatrix
    optimum: int
    witness: RMatrix
    nodes_expanded: int
    elapsed: float
    exhausted: bool
    optima_count: int | None = None
    formula_bound: int | None = None
    backend: str = DEFAULT_BACKEND

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "r": self.r,
            "pattern": format_matrix(self.pattern),
            "optimum": self.optimum,
            "witness": format_matrix(self.witness),
            "optima_count": self.optima_count,
            "nodes_expanded": self.nodes_expanded,
            "elapsed": self.elapsed,
            "exhausted": self.exhausted,
            "formula_bound": self.formula_bound,
            "backend": self.backend,
        }


def _variant_needs(F: RMatrix) -> np.ndarray:
    """Requirement vectors over binary patterns, one per distinct row placement of F."""
    n = F.m
    rows = set()
    for pi in itertools.permutations(range(n)):
        need = [0] * (1 << n)
        for col in F.cols:
            need[sum(col[i] << pi[i] for i in range(n))] += 1
        rows.add(tuple(need))
    return np.array(sorted(rows), dtype=np.int32).reshape(len(rows), 1 << n)


@dataclass
class Problem:
    """Candidate columns and pattern tables for one ``(m, r, F)``."""

    m: int
    r: int
    F: RMatrix
    cands: list = field(init=False)
    index: dict = field(init=False)
    pat: np.ndarray = field(init=False)
    need: np.ndarray = field(init=False)

    def __post_init__(self):
        F = self.F
        if F.n == 0:
            raise MatrixError("forbidden configuration must have at least one column")
        if not F.is_binary:
            raise MatrixError("only (0,1)-configurations can be forbidden")
        self.cands = all_columns(self.m, self.r)
        self.index = {c: i for i, c in enumerate(self.cands)}
        n = F.m
        self.need = _variant_needs(F)
        relevant = self.need.max(axis=0) > 0
        arr = np.array(self.cands, dtype=np.int64).reshape(len(self.cands), self.m)
        weights = 1 << np.arange(n, dtype=np.int64)
        subsets = list(itertools.combinations(range(self.m), n)) if n <= self.m else []
        pat = np.full((len(subsets), len(self.cands)), -1, dtype=np.int32)
        for s, S in enumerate(subsets):
            sub = arr[:, list(S)] if n else np.zeros((len(self.cands), 0), dtype=np.int64)
            ok = (sub < 2).all(axis=1)
            codes = sub @ weights if n else np.zeros(len(self.cands), dtype=np.int64)
            ok &= relevant[np.where(ok, codes, 0)]
            pat[s] = np.where(ok, codes, -1)
        self.pat = pat

    @property
    def n_cands(self) -> int:
        return len(self.cands)

    def state(self, backend: str | None = None):
        return get_backend(backend).AvoidState(self.pat, self.need, self.n_cands)

    def matrix(self, ids) -> RMatrix:
        return RMatrix(self.m, self.r, [self.cands[i] for i in ids])

    def ids_of(self, A: RMatrix) -> list[int]:
        if A.m != self.m or A.r > self.r:
            raise MatrixError("matrix shape does not match the search space")
        return [self.index[c] for c in A.cols]


def _check_space(m: int, r: int, max_candidates: int) -> None:
    if r < 2 or m < 0:
        raise MatrixError(f"invalid parameters m={m}, r={r}")
    if r**m > max_candidates:
        raise CandidateSpaceTooLarge(f"r^m = {r**m} exceeds the enumeration bound {max_candidates}")


def formula_upper_bound(m: int, r: int, F: RMatrix) -> int:
    """Unconditional upper bound from ``F < p*K_k`` and, for single-column blocks, the mark bound."""
    k = F.m
    p = max(F.multiplicities.values())
    ub = sum(math.comb(m, i) * (r - 1) ** (m - i) for i in range(min(k, m + 1)))
    ub += (p - 1) * math.comb(m, k)
    if len(F.colset) == 1 and k:
        col = F.cols[0]
        a, b = col.count(0), col.count(1)
        from .formulas import block_value

        ub = min(ub, block_value(m, r, a, b, p))
    return min(ub, r**m)


def _greedy_ids(prob: Problem, order_ids, backend=None) -> list[int]:
    st = prob.state(backend)
    picked = []
    for c in order_ids:
        if st.can_add(c):
            st.add(c)
            picked.append(c)
    return picked


def _greedy_order(prob: Problem, order: str, seed: int | None) -> list[int]:
    ids = list(range(prob.n_cands))
    if order == "lexicographic":
        return ids
    if order == "by-zero-count":
        return sorted(ids, key=lambda i: (prob.cands[i].count(0), prob.cands[i]))
    if order == "random":
        random.Random(seed).shuffle(ids)
        return ids
    raise ValueError(f"unknown greedy order {order!r}")


def lower_bound_greedy(
    m: int,
    r: int,
    F: RMatrix,
    order: str = "lexicographic",
    seed: int | None = None,
    *,
    backend: str | None = None,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> RMatrix:
    """Maximal avoider built by inserting columns in the given order when allowed."""
    _check_space(m, r, max_candidates)
    prob = Problem(m, r, F)
    return prob.matrix(_greedy_ids(prob, _greedy_order(prob, order, seed), backend))


def _orbit_min_flags(prob: Problem) -> np.ndarray:
    # the least row-permutation image of a column is its digits sorted ascending
    return np.array([tuple(sorted(c)) == c for c in prob.cands], dtype=np.uint8)


def _run(prob, budget, backend, formula_bounds, enumerate_all):
    budget = budget or SearchBudget.from_env()
    kern = get_backend(backend)
    t0 = time.monotonic()
    warm = max(
        (_greedy_ids(prob, _greedy_order(prob, o, None), backend) for o in ("lexicographic", "by-zero-count")),
        key=len,
    )
    ub = formula_upper_bound(prob.m, prob.r, prob.F) if formula_bounds else None
    order = np.arange(prob.n_cands, dtype=np.int32)
    first_ok = _orbit_min_flags(prob)
    if ub is not None and len(warm) >= ub and not enumerate_all:
        return warm, [], 0, True, ub, time.monotonic() - t0
    state = prob.state(backend)
    best, best_set, optima, nodes, exhausted = kern.branch_and_bound(
        state,
        order,
        first_ok,
        len(warm),
        enumerate_all,
        budget.nodes,
        max(0.0, budget.seconds - (time.monotonic() - t0)),
        -1 if ub is None or enumerate_all else ub,
    )
    if best_set is None:
        best_set = warm
    if enumerate_all and not optima and exhausted:
        optima = [warm]
    if ub is not None and len(best_set) >= ub:
        exhausted = True
    return best_set, optima, nodes, exhausted, ub, time.monotonic() - t0


def forb_exact(
    m: int,
    r: int,
    F: RMatrix,
    budget: SearchBudget | None = None,
    *,
    backend: str | None = None,
    formula_bounds: bool = True,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> SearchReport:
    """Largest simple m-rowed r-matrix avoiding F.

    ``formula_bounds`` lets the search stop as soon as a witness meets the
    unconditional upper bound from :func:`formula_upper_bound`; switch it off
    when the result is used to check those formulas.
    """
    _check_space(m, r, max_candidates)
    prob = Problem(m, r, F)
    best_set, _, nodes, exhausted, ub, elapsed = _run(prob, budget, backend, formula_bounds, False)
    return SearchReport(
        m=m,
        r=r,
        pattern=F,
        optimum=len(best_set),
        witness=prob.matrix(best_set),
        nodes_expanded=nodes,
        elapsed=elapsed,
        exhausted=exhausted,
        formula_bound=ub,
        backend=backend or DEFAULT_BACKEND,
    )


def enumerate_optima(
    m: int,
    r: int,
    F: RMatrix,
    budget: SearchBudget | None = None,
    *,
    backend: str | None = None,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> list[RMatrix]:
    """All optimum-size avoiders, one canonical representative per row-permutation class."""
    _check_space(m, r, max_candidates)
    prob = Problem(m, r, F)
    _, optima, _, exhausted, _, _ = _run(prob, budget, backend, False, True)
    classes = sorted({row_permutation_canon(prob.matrix(ids)) for ids in optima}, key=lambda A: A.cols)
    if not exhausted:
        raise SearchIncomplete("budget exhausted before all optima were enumerated", classes)
    return classes


def is_maximal(A: RMatrix, F: RMatrix, *, backend: str | None = None) -> bool:
    """True iff no column outside A can be added without creating F."""
    prob = Problem(A.m, A.r, F)
    st = prob.state(backend)
    ids = prob.ids_of(A)
    if len(set(ids)) != len(ids):
        raise MatrixError("is_maximal expects a simple matrix")
    for c in ids:
        if not st.can_add(c):
            raise MatrixError("matrix already contains the forbidden configuration")
        st.add(c)
    members = set(ids)
    return not any(st.can_add(c) for c in range(prob.n_cands) if c not in members)


def enumerate_maximal(
    m: int,
    r: int,
    F: RMatrix,
    budget: SearchBudget | None = None,
    *,
    backend: str | None = None,
    max_candidates: int = 512,
) -> list[RMatrix]:
    """Every maximal simple avoider of F (not reduced by symmetry)."""
    _check_space(m, r, max_candidates)
    budget = budget or SearchBudget.from_env()
    prob = Problem(m, r, F)
    st = prob.state(backend)
    C = prob.n_cands
    found: list[RMatrix] = []
    chosen: list[int] = []
    pending: list[int] = []  # excluded columns not yet blocked by the chosen ones
    nodes = 0
    t0 = time.monotonic()

    def feasible(pos: int) -> bool:
        # every excluded column must end up blocked; the final set lies inside
        # chosen + (still addable remaining), and blocking is monotone
        if not pending:
            return True
        extra = [y for y in range(pos, C) if st.can_add(y)]
        for y in extra:
            st.add(y)
        ok = all(not st.can_add(x) for x in pending)
        for y in reversed(extra):
            st.remove(y)
        return ok

    def rec(pos: int) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > budget.nodes or time.monotonic() - t0 > budget.seconds:
            raise SearchIncomplete("budget exhausted while enumerating maximal avoiders", found)
        if pos == C:
            if all(not st.can_add(x) for x in pending):
                found.append(prob.matrix(chosen))
            return
        if not feasible(pos):
            return
        if st.can_add(pos):
            st.add(pos)
            chosen.append(pos)
            still = [x for x in pending if st.can_add(x)]
            saved, pending[:] = list(pending), still
            rec(pos + 1)
            pending[:] = saved
            chosen.pop()
            st.remove(pos)
            pending.append(pos)
            rec(pos + 1)
            pending.pop()
        else:
            rec(pos + 1)

    rec(0)
    return found
