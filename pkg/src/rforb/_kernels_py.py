"""Pure-Python search kernels (reference implementation and fallback).

The avoidance state tracks, for every sorted row subset ``s`` of size
``n = rows(F)``, how many chosen columns restrict to each binary pattern
``q``.  A placement ``v`` of F's rows on that subset needs ``need[v][q]``
columns of pattern ``q``; ``deficit[s][v]`` is the total shortfall.  F occurs
iff some deficit reaches zero.
"""
from __future__ import annotations

import time


class AvoidState:
    def __init__(self, pat, need, n_cands: int):
        # pat: (S, C) pattern table, -1 where the candidate is irrelevant on s
        # need: (V, P) requirement table
        pat = [list(map(int, row)) for row in pat]
        need = [list(map(int, row)) for row in need]
        self.n_subsets = len(pat)
        self.n_cands = n_cands
        self.need = need
        self.n_variants = len(need)
        n_patterns = len(need[0]) if need else 0
        self.slots = [[] for _ in range(self.n_cands)]
        for s, row in enumerate(pat):
            for c, q in enumerate(row):
                if q >= 0:
                    self.slots[c].append((s, q))
        # variants that actually require pattern q
        self.users = [
            [(v, need[v][q]) for v in range(self.n_variants) if need[v][q] > 0]
            for q in range(n_patterns)
        ]
        self.total_need = [sum(row) for row in need]
        self.counts = [[0] * n_patterns for _ in range(self.n_subsets)]
        self.deficit = [list(self.total_need) for _ in range(self.n_subsets)]
        self.size = 0
        self.chosen = [False] * self.n_cands

    def reset(self):
        for s in range(self.n_subsets):
            self.counts[s] = [0] * len(self.counts[s])
            self.deficit[s] = list(self.total_need)
        self.size = 0
        self.chosen = [False] * self.n_cands

    def can_add(self, c: int) -> bool:
        """False iff adding candidate ``c`` completes a copy of F that uses it."""
        counts, deficit, users = self.counts, self.deficit, self.users
        for s, q in self.slots[c]:
            cnt = counts[s][q]
            dfs = deficit[s]
            for v, k in users[q]:
                if dfs[v] - (1 if cnt < k else 0) <= 0:
                    return False
        return True

    def add(self, c: int) -> None:
        counts, deficit, users = self.counts, self.deficit, self.users
        for s, q in self.slots[c]:
            cnt = counts[s][q]
            dfs = deficit[s]
            for v, k in users[q]:
                if cnt < k:
                    dfs[v] -= 1
            counts[s][q] = cnt + 1
        self.size += 1
        self.chosen[c] = True

    def remove(self, c: int) -> None:
        counts, deficit, users = self.counts, self.deficit, self.users
        for s, q in self.slots[c]:
            cnt = counts[s][q] - 1
            counts[s][q] = cnt
            dfs = deficit[s]
            for v, k in users[q]:
                if cnt < k:
                    dfs[v] += 1
        self.size -= 1
        self.chosen[c] = False

    def count_addable(self, order, start: int) -> int:
        can_add = self.can_add
        total = 0
        for i in range(start, len(order)):
            if can_add(order[i]):
                total += 1
        return total


def branch_and_bound(
    state: AvoidState,
    order,
    first_ok,
    best: int,
    enumerate_all: bool,
    node_limit: int,
    time_limit: float,
    stop_at: int,
):
    """Include/exclude depth-first search over ``order``.

    Returns ``(best, best_set, optima, nodes, exhausted)``.  ``best_set`` is
    None when nothing strictly better than the incoming ``best`` was found.
    With ``enumerate_all`` every leaf of size ``best`` is collected in
    ``optima`` (restarting whenever ``best`` improves).
    """
    order = [int(c) for c in order]
    first_ok = [bool(x) for x in first_ok]
    C = len(order)
    phase = [0] * C
    best_set = None
    optima: list[list[int]] = []
    nodes = 0
    exhausted = True
    t0 = time.monotonic()
    pos = 0
    down = True
    while True:
        if down:
            nodes += 1
            if nodes > node_limit or ((nodes & 1023) == 0 and time.monotonic() - t0 > time_limit):
                exhausted = False
                break
            if pos == C:
                size = state.size
                if size > best:
                    best = size
                    best_set = [order[i] for i in range(C) if phase[i] == 1]
                    optima = [best_set] if enumerate_all else []
                    if 0 <= stop_at <= best and not enumerate_all:
                        break
                elif enumerate_all and size == best:
                    optima.append([order[i] for i in range(C) if phase[i] == 1])
                down = False
                continue
            ub = state.size + state.count_addable(order, pos)
            if ub < best or (ub == best and not enumerate_all):
                down = False
                continue
            c = order[pos]
            if (state.size > 0 or first_ok[c]) and state.can_add(c):
                state.add(c)
                phase[pos] = 1
            else:
                phase[pos] = 2
            pos += 1
        else:
            pos -= 1
            if pos < 0:
                break
            if phase[pos] == 1:
                state.remove(order[pos])
                phase[pos] = 2
                pos += 1
                down = True
    # unwind so the caller gets a clean state back
    for i in range(C):
        if phase[i] == 1 and state.chosen[order[i]]:
            state.remove(order[i])
    return best, best_set, optima, nodes, exhausted
