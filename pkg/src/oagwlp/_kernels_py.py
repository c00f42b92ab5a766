"""Pure Python/numpy kernels. Same signatures as the compiled ``_kernels`` module."""

import math

import numpy as np


def fill_wstack(codes, levels, out):
    """Write ``W_0 .. W_m`` for every run pair into ``out`` of shape ``(m+1, n, n)``.

    Entry ``[j, f, g]`` is the ``j``-th elementary symmetric polynomial of the
    vector with ``s_i - 1`` where runs ``f`` and ``g`` agree on factor ``i`` and
    ``-1`` where they differ.
    """
    codes = np.asarray(codes)
    levels = np.asarray(levels)
    m = codes.shape[1]
    out[...] = 0
    out[0] = 1
    for i in range(m):
        col = codes[:, i]
        s = np.where(col[:, None] == col[None, :], levels[i] - 1, -1)
        # multiply the running polynomial by (1 + s x); descending j keeps it in place
        for j in range(i + 1, 0, -1):
            out[j] += s * out[j - 1]


def unrank_combination(rank, n, p):
    """The ``rank``-th ``p``-subset of ``range(n)`` in lexicographic order."""
    combo = []
    x = 0
    for k in range(p, 0, -1):
        while True:
            c = math.comb(n - x - 1, k - 1)
            if rank < c:
                break
            rank -= c
            x += 1
        combo.append(x)
        x += 1
    return combo


def next_combination(combo, n):
    p = len(combo)
    i = p - 1
    while i >= 0 and combo[i] == n - p + i:
        i -= 1
    if i < 0:
        return False
    combo[i] += 1
    for k in range(i + 1, p):
        combo[k] = combo[k - 1] + 1
    return True


def removal_deltas(W, rowsums, p, start, combos_out, deltas_out):
    """Fill a block of consecutive lexicographic ``p``-subsets and their numerator changes.

    For removed set ``T``, ``deltas_out[r, j] = -2 * sum_{f in T} rowsum_j(f)
    + sum_{f, g in T} W_j(f, g)``.
    """
    n = W.shape[1]
    count = combos_out.shape[0]
    combo = unrank_combination(start, n, p)
    rows = []
    for _ in range(count):
        rows.append(list(combo))
        next_combination(combo, n)
    combos = np.array(rows, dtype=np.int64).reshape(count, p)
    combos_out[...] = combos
    delta = -2 * rowsums[:, combos].sum(axis=2)
    for a in range(p):
        for b in range(p):
            delta += W[:, combos[:, a], combos[:, b]]
    deltas_out[...] = delta.T


def removal_groups(W, rowsums, p, start, count, reps):
    """Evaluate a block of subsets and group equal numerator changes.

    Returns ``(keys, counts, rep_positions, combos)``: one row of ``keys`` per
    distinct change vector, how many subsets produced it, the block positions of
    its first ``reps`` subsets (``-1`` padded) and the 0-based subsets themselves.
    """
    combos = np.empty((count, p), dtype=np.int64)
    deltas = np.empty((count, W.shape[0]), dtype=np.int64)
    removal_deltas(W, rowsums, p, start, combos, deltas)
    keys, inverse, counts = np.unique(deltas, axis=0, return_inverse=True, return_counts=True)
    inverse = inverse.reshape(-1)
    order = np.argsort(inverse, kind="stable")
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    rank_in_group = np.arange(count) - starts[inverse[order]]
    keep = rank_in_group < reps
    positions = np.full((len(keys), max(reps, 1)), -1, dtype=np.int64)
    positions[inverse[order][keep], rank_in_group[keep]] = order[keep]
    return keys, counts.astype(np.int64), positions[:, :reps], combos
