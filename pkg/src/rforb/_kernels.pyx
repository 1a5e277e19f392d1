# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels; same contract as ``_kernels_py``."""
import time

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef class AvoidState:
    cdef int[::1] ptr        # CSR offsets per candidate
    cdef int[::1] slot_s     # subset index of each slot
    cdef int[::1] slot_q     # pattern code of each slot
    cdef int[:, ::1] need    # (V, P)
    cdef int[:, ::1] counts  # (S, P)
    cdef int[:, ::1] deficit # (S, V)
    cdef int[::1] total_need
    cdef int[::1] uptr       # CSR over patterns -> requiring variants
    cdef int[::1] uvar
    cdef int[::1] uneed
    cdef unsigned char[::1] chosen_mv
    cdef public int size
    cdef public int n_subsets
    cdef public int n_cands

    def __init__(self, pat, need, int n_cands):
        pat = np.ascontiguousarray(pat, dtype=np.int32).reshape(-1, n_cands)
        need_arr = np.ascontiguousarray(need, dtype=np.int32)
        if need_arr.ndim != 2:
            need_arr = need_arr.reshape(len(need_arr), -1)
        self.n_subsets = pat.shape[0]
        self.n_cands = n_cands
        cdef int P = need_arr.shape[1]
        cdef int V = need_arr.shape[0]
        # slots grouped by candidate
        cand, subs = np.nonzero(pat.T >= 0)
        self.ptr = np.concatenate(
            [[0], np.cumsum(np.bincount(cand, minlength=n_cands))]
        ).astype(np.int32)
        self.slot_s = np.ascontiguousarray(subs, dtype=np.int32)
        self.slot_q = np.ascontiguousarray(pat[subs, cand], dtype=np.int32)
        users_v = []
        users_k = []
        uptr = [0]
        for q in range(P):
            for v in range(V):
                if need_arr[v, q] > 0:
                    users_v.append(v)
                    users_k.append(need_arr[v, q])
            uptr.append(len(users_v))
        self.uptr = np.array(uptr, dtype=np.int32)
        self.uvar = np.array(users_v, dtype=np.int32)
        self.uneed = np.array(users_k, dtype=np.int32)
        self.need = need_arr
        self.total_need = need_arr.sum(axis=1).astype(np.int32)
        self.counts = np.zeros((self.n_subsets, P), dtype=np.int32)
        self.deficit = np.tile(np.asarray(self.total_need), (self.n_subsets, 1)).astype(np.int32)
        self.chosen_mv = np.zeros(n_cands, dtype=np.uint8)
        self.size = 0

    @property
    def chosen(self):
        return np.asarray(self.chosen_mv).astype(bool)

    def reset(self):
        np.asarray(self.counts)[:] = 0
        np.asarray(self.deficit)[:] = np.asarray(self.total_need)
        np.asarray(self.chosen_mv)[:] = 0
        self.size = 0

    cdef inline bint _can_add(self, int c) nogil:
        cdef int i, s, q, cnt, u, k
        for i in range(self.ptr[c], self.ptr[c + 1]):
            s = self.slot_s[i]
            q = self.slot_q[i]
            cnt = self.counts[s, q]
            for u in range(self.uptr[q], self.uptr[q + 1]):
                k = self.uneed[u]
                if self.deficit[s, self.uvar[u]] - (1 if cnt < k else 0) <= 0:
                    return False
        return True

    cdef inline void _add(self, int c) nogil:
        cdef int i, s, q, cnt, u
        for i in range(self.ptr[c], self.ptr[c + 1]):
            s = self.slot_s[i]
            q = self.slot_q[i]
            cnt = self.counts[s, q]
            for u in range(self.uptr[q], self.uptr[q + 1]):
                if cnt < self.uneed[u]:
                    self.deficit[s, self.uvar[u]] -= 1
            self.counts[s, q] = cnt + 1
        self.size += 1
        self.chosen_mv[c] = 1

    cdef inline void _remove(self, int c) nogil:
        cdef int i, s, q, cnt, u
        for i in range(self.ptr[c], self.ptr[c + 1]):
            s = self.slot_s[i]
            q = self.slot_q[i]
            cnt = self.counts[s, q] - 1
            self.counts[s, q] = cnt
            for u in range(self.uptr[q], self.uptr[q + 1]):
                if cnt < self.uneed[u]:
                    self.deficit[s, self.uvar[u]] += 1
        self.size -= 1
        self.chosen_mv[c] = 0

    cdef int _count_addable(self, int[::1] order, int start) nogil:
        cdef int i, total = 0
        for i in range(start, order.shape[0]):
            if self._can_add(order[i]):
                total += 1
        return total

    def can_add(self, int c):
        return self._can_add(c)

    def add(self, int c):
        self._add(c)

    def remove(self, int c):
        self._remove(c)

    def count_addable(self, order, int start):
        cdef int[::1] o = np.ascontiguousarray(order, dtype=np.int32)
        return self._count_addable(o, start)


def branch_and_bound(
    AvoidState state,
    order,
    first_ok,
    long best,
    bint enumerate_all,
    long long node_limit,
    double time_limit,
    long stop_at,
):
    cdef int[::1] o = np.ascontiguousarray(order, dtype=np.int32)
    cdef unsigned char[::1] fok = np.ascontiguousarray(first_ok, dtype=np.uint8)
    cdef int C = o.shape[0]
    cdef unsigned char[::1] phase = np.zeros(C, dtype=np.uint8)
    cdef long long nodes = 0
    cdef bint exhausted = True
    cdef bint down = True
    cdef int pos = 0
    cdef int c, i, size
    cdef long ub
    best_set = None
    optima = []
    t0 = time.monotonic()
    while True:
        if down:
            nodes += 1
            if nodes > node_limit:
                exhausted = False
                break
            if (nodes & 4095) == 0 and time.monotonic() - t0 > time_limit:
                exhausted = False
                break
            if pos == C:
                size = state.size
                if size > best:
                    best = size
                    best_set = [o[i] for i in range(C) if phase[i] == 1]
                    optima = [best_set] if enumerate_all else []
                    if 0 <= stop_at <= best and not enumerate_all:
                        break
                elif enumerate_all and size == best:
                    optima.append([o[i] for i in range(C) if phase[i] == 1])
                down = False
                continue
            ub = state.size + state._count_addable(o, pos)
            if ub < best or (ub == best and not enumerate_all):
                down = False
                continue
            c = o[pos]
            if (state.size > 0 or fok[c]) and state._can_add(c):
                state._add(c)
                phase[pos] = 1
            else:
                phase[pos] = 2
            pos += 1
        else:
            pos -= 1
            if pos < 0:
                break
            if phase[pos] == 1:
                state._remove(o[pos])
                phase[pos] = 2
                pos += 1
                down = True
    for i in range(C):
        if phase[i] == 1 and state.chosen_mv[o[i]]:
            state._remove(o[i])
    return best, best_set, optima, nodes, exhausted
