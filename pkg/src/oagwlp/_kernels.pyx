# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the W-stack and subset evaluation.

Mirrors ``_kernels_py``; callers guarantee that all values fit in int64.
"""

from libc.stdlib cimport malloc, free

import numpy as np

from ._kernels_py import unrank_combination


def fill_wstack(const long long[:, ::1] codes, const long long[::1] levels, long long[:, :, ::1] out):
    cdef Py_ssize_t n = codes.shape[0]
    cdef Py_ssize_t m = codes.shape[1]
    cdef Py_ssize_t f, g, i, j
    cdef long long s
    cdef long long *poly = <long long *> malloc((m + 1) * sizeof(long long))
    if poly == NULL:
        raise MemoryError()
    try:
        with nogil:
            for f in range(n):
                for g in range(f, n):
                    poly[0] = 1
                    for j in range(1, m + 1):
                        poly[j] = 0
                    for i in range(m):
                        s = levels[i] - 1 if codes[f, i] == codes[g, i] else -1
                        for j in range(i + 1, 0, -1):
                            poly[j] += s * poly[j - 1]
                    for j in range(m + 1):
                        out[j, f, g] = poly[j]
                        out[j, g, f] = poly[j]
    finally:
        free(poly)


def removal_deltas(const long long[:, :, ::1] W, const long long[:, ::1] rowsums, int p,
                   long long start, long long[:, ::1] combos_out, long long[:, ::1] deltas_out):
    cdef Py_ssize_t nj = W.shape[0]
    cdef Py_ssize_t n = W.shape[1]
    cdef Py_ssize_t count = combos_out.shape[0]
    cdef Py_ssize_t r, a, b, j, i, k
    cdef long long acc
    cdef long long *combo = <long long *> malloc(max(p, 1) * sizeof(long long))
    if combo == NULL:
        raise MemoryError()
    first = unrank_combination(start, n, p)
    for a in range(p):
        combo[a] = first[a]
    try:
        with nogil:
            for r in range(count):
                for a in range(p):
                    combos_out[r, a] = combo[a]
                for j in range(nj):
                    acc = 0
                    for a in range(p):
                        acc -= 2 * rowsums[j, combo[a]]
                        for b in range(p):
                            acc += W[j, combo[a], combo[b]]
                    deltas_out[r, j] = acc
                # advance to the next subset in lexicographic order
                i = p - 1
                while i >= 0 and combo[i] == n - p + i:
                    i -= 1
                if i < 0:
                    continue
                combo[i] += 1
                for k in range(i + 1, p):
                    combo[k] = combo[k - 1] + 1
    finally:
        free(combo)


cdef inline unsigned long long _mix(const long long *row, Py_ssize_t width) noexcept nogil:
    cdef unsigned long long h = 1469598103934665603ULL
    cdef Py_ssize_t i
    for i in range(width):
        h ^= <unsigned long long> row[i]
        h *= 1099511628211ULL
        h ^= h >> 29
    return h


def removal_groups(const long long[:, :, ::1] W, const long long[:, ::1] rowsums, int p,
                   long long start, Py_ssize_t count, int reps):
    cdef Py_ssize_t width = W.shape[0]
    cdef Py_ssize_t r, i, slot, g, ngroups = 0
    cdef Py_ssize_t cap = 1
    while cap < 2 * count:
        cap <<= 1
    combos_arr = np.empty((count, p), dtype=np.int64)
    deltas_arr = np.empty((count, width), dtype=np.int64)
    removal_deltas(W, rowsums, p, start, combos_arr, deltas_arr)
    table_arr = np.full(cap, -1, dtype=np.int64)
    owner_arr = np.empty(count, dtype=np.int64)
    counts_arr = np.zeros(count, dtype=np.int64)
    positions_arr = np.full((count, max(reps, 1)), -1, dtype=np.int64)
    cdef long long[:, ::1] deltas = deltas_arr
    cdef long long[::1] table = table_arr
    cdef long long[::1] owner = owner_arr
    cdef long long[::1] counts = counts_arr
    cdef long long[:, ::1] positions = positions_arr
    cdef bint same
    with nogil:
        for r in range(count):
            slot = <Py_ssize_t> (_mix(&deltas[r, 0], width) & (cap - 1))
            while True:
                g = table[slot]
                if g < 0:
                    g = ngroups
                    ngroups += 1
                    table[slot] = g
                    owner[g] = r
                    break
                same = True
                for i in range(width):
                    if deltas[owner[g], i] != deltas[r, i]:
                        same = False
                        break
                if same:
                    break
                slot = (slot + 1) & (cap - 1)
            if counts[g] < reps:
                positions[g, counts[g]] = r
            counts[g] += 1
    keys = deltas_arr[owner_arr[:ngroups]]
    return keys, counts_arr[:ngroups], positions_arr[:ngroups, :reps], combos_arr
