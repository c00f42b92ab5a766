"""Which runs to remove from a fraction: exact sub-fraction GWLPs and searches.

For a removed index set ``T`` of size ``p`` and symmetric ``W_j``::

    (n - p)^2 A_j(F minus T) = N_j(F) - 2 sum_{f in T} rowsum_j(f) + sum_{f, g in T} W_j(f, g)

so every candidate costs ``O(p^2 m)`` integer operations on a shared stack.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._backend import kernels as _default_kernels
from .core import GwlpExact, gma_key
from .errors import CapacityError, StructuralError
from .wstack import INT64_MAX, WStack, w_marginal

__all__ = [
    "RemovalSubset",
    "RemovalGroup",
    "RemovalReport",
    "GreedyResult",
    "gwlp_after_removal",
    "rank_single_removals",
    "exhaustive_search",
    "greedy_sequential",
    "DEFAULT_MAX_SUBSETS",
]

DEFAULT_MAX_SUBSETS = 10**7
DEFAULT_REPRESENTATIVES = 3
CHUNK_SIZE = 1 << 15


@dataclass(frozen=True)
class RemovalSubset:
    """Strictly increasing 1-based run indices to delete."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(sorted(int(i) for i in self.indices))
        if len(set(idx)) != len(idx):
            raise StructuralError(f"duplicate run index in {self.indices}")
        object.__setattr__(self, "indices", idx)

    @property
    def p(self) -> int:
        return len(self.indices)

    def check(self, n: int) -> None:
        if not 1 <= self.p < n:
            raise StructuralError(f"must remove between 1 and {n - 1} runs, got {self.p}")
        if self.indices[0] < 1 or self.indices[-1] > n:
            raise StructuralError(f"run indices must lie in 1..{n}")


@dataclass(frozen=True)
class RemovalGroup:
    gwlp: GwlpExact
    count: int
    representatives: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class RemovalReport:
    p: int
    n: int
    total_subsets: int
    groups: tuple[RemovalGroup, ...]

    @property
    def best_group(self) -> RemovalGroup | None:
        return self.groups[0] if self.groups else None


@dataclass(frozen=True)
class GreedyResult:
    removed: tuple[int, ...]
    steps: tuple[GwlpExact, ...]
    # every run index that tied with the pick at each step
    ties: tuple[tuple[int, ...], ...]


def _as_subset(subset) -> RemovalSubset:
    return subset if isinstance(subset, RemovalSubset) else RemovalSubset(tuple(subset))


def gwlp_after_removal(w: WStack, subset: RemovalSubset | Iterable[int]) -> GwlpExact:
    subset = _as_subset(subset)
    subset.check(w.n)
    idx = [i - 1 for i in subset.indices]
    totals = w.totals()
    rows = w.row_sums()
    nums = []
    for j in range(w.m + 1):
        block = w[j][np.ix_(idx, idx)]
        nums.append(totals[j] - 2 * sum(int(rows[j, i]) for i in idx) + int(block.sum()))
    return GwlpExact.from_numerators(nums, w.n - subset.p)


def rank_single_removals(w: WStack) -> list[tuple[int, GwlpExact]]:
    """All single-run removals, best first; ties keep ascending run order."""
    if w.n < 2:
        raise StructuralError("need at least two runs to remove one")
    totals = w.totals()
    ranked = []
    for f in range(1, w.n + 1):
        nums = [totals[j] - w_marginal(w, j, f) for j in range(w.m + 1)]
        ranked.append((f, GwlpExact.from_numerators(nums, w.n - 1)))
    ranked.sort(key=lambda item: gma_key(item[1]))
    return ranked


def _evaluate_chunk(kernels, W, rowsums, p, start, count, reps):
    keys, counts, positions, combos = kernels.removal_groups(W, rowsums, p, start, count, reps)
    out = []
    for key, c, pos in zip(keys.tolist(), counts.tolist(), positions.tolist()):
        out.append((tuple(key), c, [tuple(v + 1 for v in combos[r].tolist()) for r in pos if r >= 0]))
    return out


def exhaustive_search(
    w: WStack,
    p: int,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
    representatives: int = DEFAULT_REPRESENTATIVES,
    threads: int = 1,
    force: bool = False,
    kernels=None,
    chunk_size: int | None = None,
) -> RemovalReport:
    """Evaluate every ``p``-subset of runs and group equal GWLPs.

    Subsets are enumerated in lexicographic order and split into fixed ranges;
    groups are merged in range order, so the report (including which subsets
    are kept as representatives) does not depend on ``threads``.
    """
    kernels = kernels or _default_kernels
    chunk_size = chunk_size or CHUNK_SIZE
    n = w.n
    if not 1 <= p < n:
        raise StructuralError(f"p must lie in 1..{n - 1}, got {p}")
    total = math.comb(n, p)
    if total > max_subsets and not force:
        raise CapacityError(f"{total} subsets exceed the limit of {max_subsets}; raise max_subsets or force the search")
    if (2 * p * n + p * p) * w.space.full_size > INT64_MAX:
        raise CapacityError("subset sums could overflow 64-bit integers")

    W = np.ascontiguousarray(w.matrices)
    rowsums = np.ascontiguousarray(w.row_sums())
    ranges = [(s, min(chunk_size, total - s)) for s in range(0, total, chunk_size)]

    def work(r):
        return _evaluate_chunk(kernels, W, rowsums, p, r[0], r[1], representatives)

    if threads > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, ranges))
    else:
        results = [work(r) for r in ranges]

    merged: dict[tuple[int, ...], list] = {}
    for chunk in results:
        for key, count, reps in chunk:
            slot = merged.setdefault(key, [0, []])
            slot[0] += count
            slot[1].extend(reps[: representatives - len(slot[1])])

    totals = w.totals()
    groups = []
    for key, (count, reps) in merged.items():
        nums = [t + d for t, d in zip(totals, key)]
        groups.append(RemovalGroup(GwlpExact.from_numerators(nums, n - p), count, tuple(reps)))
    groups.sort(key=lambda g: g.gwlp.numerators)
    return RemovalReport(p, n, total, tuple(groups))


def greedy_sequential(w: WStack, p: int, first: int | None = None) -> GreedyResult:
    """Remove runs one at a time, each time taking the best single removal.

    Ties go to the lowest run index. ``first`` forces the first pick. The result
    is generally not the best ``p``-subset.
    """
    if not 1 <= p < w.n:
        raise StructuralError(f"p must lie in 1..{w.n - 1}, got {p}")
    if first is not None and not 1 <= first <= w.n:
        raise StructuralError(f"first pick {first} outside 1..{w.n}")
    labels = list(range(1, w.n + 1))
    current = w
    removed, steps, ties = [], [], []
    for step in range(p):
        ranked = rank_single_removals(current)
        best_key = gma_key(ranked[0][1])
        tied = tuple(labels[f - 1] for f, g in ranked if gma_key(g) == best_key)
        if step == 0 and first is not None:
            local = labels.index(first) + 1
            result = next(g for f, g in ranked if f == local)
        else:
            local, result = ranked[0]
        removed.append(labels[local - 1])
        steps.append(result)
        ties.append(tied)
        current = current.without([local])
        del labels[local - 1]
    return GreedyResult(tuple(removed), tuple(steps), tuple(ties))
