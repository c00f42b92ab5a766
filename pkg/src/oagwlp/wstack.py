"""Exact pairwise-contribution matrices ``W_0 .. W_m`` and the GWLP built from them.

For runs ``f`` and ``g`` let ``S_i`` be ``s_i - 1`` when they agree on factor
``i`` and ``-1`` otherwise. ``W_j(f, g)`` is the ``j``-th elementary symmetric
polynomial of ``S`` and ``n**2 * A_j = sum_{f, g} W_j(f, g)``. Everything here
is integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._backend import kernels as _default_kernels
from .core import DesignSpace, Fraction, GwlpExact, Run
from .errors import (
    CapacityError,
    InternalConsistencyError,
    StructuralError,
    UnsupportedDesignError,
)

__all__ = [
    "SVector",
    "WStack",
    "s_vector",
    "w_entries_all_orders",
    "build_wstack",
    "gwlp_from_wstack",
    "gwlp",
    "w_marginal",
    "singleton_gwlp",
    "union_gwlp",
    "twolevel_wstack",
]

INT64_MAX = 2**63 - 1
MAX_STACK_BYTES = 4 * 2**30


@dataclass(frozen=True)
class SVector:
    values: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class WStack:
    """The ``(m+1, n, n)`` stack of symmetric integer matrices for one fraction.

    Row ``i`` (0-based) belongs to run ``i + 1`` of the fraction.
    """

    space: DesignSpace
    matrices: np.ndarray

    def __post_init__(self):
        self.matrices.setflags(write=False)

    @property
    def n(self) -> int:
        return self.matrices.shape[1]

    @property
    def m(self) -> int:
        return self.matrices.shape[0] - 1

    def __getitem__(self, j: int) -> np.ndarray:
        return self.matrices[j]

    def __eq__(self, other):
        if not isinstance(other, WStack):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.matrices, other.matrices)

    def row_sums(self) -> np.ndarray:
        """``(m+1, n)`` array of ``sum_g W_j(f, g)``."""
        return self.matrices.sum(axis=2)

    def totals(self) -> tuple[int, ...]:
        """Exact ``sum_{f,g} W_j(f, g)`` for every ``j``."""
        rs = self.row_sums()
        return tuple(sum(int(v) for v in row) for row in rs)

    def without(self, indices: Sequence[int]) -> "WStack":
        """Stack of the sub-fraction with the given 1-based runs removed."""
        drop = {i - 1 for i in indices}
        keep = [i for i in range(self.n) if i not in drop]
        if not keep:
            raise StructuralError("cannot remove every run")
        sub = self.matrices[:, keep][:, :, keep]
        return WStack(self.space, np.ascontiguousarray(sub))


def s_vector(space: DesignSpace, f: Run, g: Run) -> SVector:
    space.validate(f.codes)
    space.validate(g.codes)
    return SVector(tuple(s - 1 if a == b else -1 for a, b, s in zip(f.codes, g.codes, space.levels)))


def w_entries_all_orders(svec: SVector | Sequence[int]) -> list[int]:
    """Coefficients of ``prod_i (1 + S_i x)``, i.e. ``e_0 .. e_m`` of the S-vector."""
    values = svec.values if isinstance(svec, SVector) else tuple(svec)
    poly = [1] + [0] * len(values)
    for i, s in enumerate(values):
        for j in range(i + 1, 0, -1):
            poly[j] += s * poly[j - 1]
    return poly


def check_capacity(space: DesignSpace, n: int) -> None:
    nbytes = (space.m + 1) * n * n * 8
    if nbytes > MAX_STACK_BYTES:
        raise CapacityError(f"W-stack would need {nbytes} bytes (n={n}, m={space.m}), limit is {MAX_STACK_BYTES}")
    # entries are bounded by #D in absolute value, row sums by n * #D
    if n * space.full_size > INT64_MAX:
        raise CapacityError(f"n * #D = {n * space.full_size} does not fit in 64 bits")


def build_wstack(fraction: Fraction, kernels=None) -> WStack:
    kernels = kernels or _default_kernels
    space = fraction.space
    check_capacity(space, fraction.n)
    codes = np.ascontiguousarray(fraction.codes, dtype=np.int64)
    levels = np.array(space.levels, dtype=np.int64)
    out = np.empty((space.m + 1, fraction.n, fraction.n), dtype=np.int64)
    kernels.fill_wstack(codes, levels, out)
    return WStack(space, out)


def gwlp_from_wstack(w: WStack) -> GwlpExact:
    totals = w.totals()
    n = w.n
    if totals[0] != n * n or any(v < 0 for v in totals):
        raise InternalConsistencyError(f"W-stack totals {totals} are not a valid GWLP numerator")
    return GwlpExact.from_numerators(totals, n)


def gwlp(fraction: Fraction) -> GwlpExact:
    """Exact GWLP of a fraction."""
    return gwlp_from_wstack(build_wstack(fraction))


def w_marginal(w: WStack, j: int, run_index: int) -> int:
    """``w_{j,f}``: row sum plus column sum minus the diagonal entry of ``W_j`` at run ``f``.

    Removing run ``f`` satisfies ``n^2 A_j(F) = (n-1)^2 A_j(F minus f) + w_{j,f}``.
    """
    if not 0 <= j <= w.m:
        raise StructuralError(f"order {j} outside 0..{w.m}")
    if not 1 <= run_index <= w.n:
        raise StructuralError(f"run index {run_index} outside 1..{w.n}")
    mat = w[j]
    f = run_index - 1
    return int(mat[f].sum()) + int(mat[:, f].sum()) - int(mat[f, f])


def singleton_gwlp(space: DesignSpace) -> list[int]:
    return w_entries_all_orders([s - 1 for s in space.levels])


def union_gwlp(parts: Sequence[Fraction]) -> GwlpExact:
    """GWLP of the multiset union of fractions over one design space.

    The cross terms between parts are the off-diagonal blocks of the union's
    W-stack, so the union stack yields the whole decomposition at once.
    """
    if not parts:
        raise StructuralError("need at least one part")
    space = parts[0].space
    for p in parts[1:]:
        if p.space != space:
            raise StructuralError("all parts must share one design space")
    runs = tuple(r for p in parts for r in p.runs)
    return gwlp_from_wstack(build_wstack(Fraction(space, runs)))


def twolevel_wstack(fraction: Fraction) -> WStack:
    """W-stack of a two-level fraction via the Krawtchouk three-term recursion.

    With ``X`` the +-1 design matrix, ``W_0 = J``, ``W_1 = X X^T`` and
    ``j W_j = W_1 * W_{j-1} - (m - j + 2) W_{j-2}`` (elementwise product).
    """
    space = fraction.space
    if any(s != 2 for s in space.levels):
        raise UnsupportedDesignError("the recursion only applies to two-level designs")
    check_capacity(space, fraction.n)
    m, n = space.m, fraction.n
    x = 1 - 2 * fraction.codes
    out = np.empty((m + 1, n, n), dtype=np.int64)
    out[0] = 1
    out[1] = x @ x.T
    for j in range(2, m + 1):
        num = out[1] * out[j - 1] - (m - j + 2) * out[j - 2]
        if np.any(num % j):
            raise InternalConsistencyError(f"recursion step {j} is not divisible by {j}")
        out[j] = num // j
    return WStack(space, out)
