"""Counting-function reference implementation over the complex coding.

Level ``k`` of an ``s``-level factor is coded by ``exp(2*pi*i*k/s)``. The
coefficients of the counting function, the aberrations and the GWLP computed
here use floating point and serve as an independent check on the exact
integer path in :mod:`oagwlp.wstack`. The strength checker is exact.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .core import DesignSpace, Fraction
from .errors import CapacityError, StructuralError

__all__ = [
    "ExponentIndex",
    "CoefficientTable",
    "coefficient",
    "coefficient_table",
    "aberration",
    "gwlp_direct",
    "is_centered",
    "are_orthogonal",
    "strength",
    "counting_array",
    "evaluate_counting_function",
    "iter_exponents",
]

MAX_GRID = 10**6
ZERO_TOL = 1e-10


@dataclass(frozen=True)
class ExponentIndex:
    alpha: tuple[int, ...]
    order: int = field(init=False, compare=False)

    def __post_init__(self):
        alpha = tuple(int(a) for a in self.alpha)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "order", sum(1 for a in alpha if a))

    def check(self, space: DesignSpace) -> None:
        if len(self.alpha) != space.m:
            raise StructuralError(f"exponent has {len(self.alpha)} entries, space has {space.m} factors")
        for a, s in zip(self.alpha, space.levels):
            if not 0 <= a < s:
                raise StructuralError(f"exponent entry {a} out of range for {s} levels")

    def negated(self, space: DesignSpace) -> "ExponentIndex":
        return ExponentIndex(tuple((-a) % s for a, s in zip(self.alpha, space.levels)))

    def minus(self, other: "ExponentIndex", space: DesignSpace) -> "ExponentIndex":
        return ExponentIndex(tuple((a - b) % s for a, b, s in zip(self.alpha, other.alpha, space.levels)))


@dataclass(frozen=True)
class CoefficientTable:
    space: DesignSpace
    n: int
    entries: dict

    @property
    def c0(self) -> float:
        return self.n / self.space.full_size

    def __getitem__(self, alpha) -> complex:
        if isinstance(alpha, ExponentIndex):
            alpha = alpha.alpha
        return self.entries[tuple(alpha)]

    def __len__(self):
        return len(self.entries)


def _as_index(alpha, space: DesignSpace) -> ExponentIndex:
    if not isinstance(alpha, ExponentIndex):
        alpha = ExponentIndex(tuple(alpha))
    alpha.check(space)
    return alpha


def _roots(s: int) -> np.ndarray:
    k = np.arange(s)
    return np.cos(2 * np.pi * k / s) + 1j * np.sin(2 * np.pi * k / s)


def iter_exponents(space: DesignSpace, max_order: int | None = None) -> Iterator[ExponentIndex]:
    """All exponents of the space with at most ``max_order`` non-null entries."""
    for alpha in itertools.product(*(range(s) for s in space.levels)):
        e = ExponentIndex(alpha)
        if max_order is None or e.order <= max_order:
            yield e


def coefficient(fraction: Fraction, alpha) -> complex:
    """Coefficient of ``X^alpha`` in the counting function, by direct summation over runs."""
    space = fraction.space
    alpha = _as_index(alpha, space)
    codes = fraction.codes
    total = np.ones(fraction.n, dtype=complex)
    for j, (a, s) in enumerate(zip(alpha.alpha, space.levels)):
        if a:
            total *= _roots(s)[(-a * codes[:, j]) % s]
    return complex(total.sum() / space.full_size)


def counting_array(fraction: Fraction) -> np.ndarray:
    """Replication count of every grid point, shaped like the grid."""
    space = fraction.space
    if space.full_size > MAX_GRID:
        raise CapacityError(f"full factorial has {space.full_size} points, limit is {MAX_GRID}")
    r = np.zeros(space.levels, dtype=np.int64)
    for run in fraction.runs:
        r[run.codes] += 1
    return r


def _all_coefficients(fraction: Fraction) -> np.ndarray:
    # sum_zeta R(zeta) * exp(-2 pi i <alpha, zeta> / s) is exactly the forward DFT
    return np.fft.fftn(counting_array(fraction)) / fraction.space.full_size


def _order_grid(space: DesignSpace) -> np.ndarray:
    grids = np.indices(space.levels)
    return (grids != 0).sum(axis=0)


def coefficient_table(fraction: Fraction, max_order: int) -> CoefficientTable:
    space = fraction.space
    if not 0 <= max_order <= space.m:
        raise StructuralError(f"max_order must lie in 0..{space.m}")
    coeffs = _all_coefficients(fraction)
    orders = _order_grid(space)
    entries = {
        tuple(int(a) for a in idx): complex(coeffs[idx])
        for idx in zip(*np.nonzero(orders <= max_order))
    }
    return CoefficientTable(space, fraction.n, entries)


def aberration(fraction: Fraction, alpha) -> float:
    alpha = _as_index(alpha, fraction.space)
    if alpha.order == 0:
        raise StructuralError("the aberration of the constant term is not defined")
    c0 = fraction.n / fraction.space.full_size
    return abs(coefficient(fraction, alpha)) ** 2 / c0**2


def gwlp_direct(fraction: Fraction) -> list[float]:
    """GWLP by summing aberrations over the whole exponent set (float)."""
    space = fraction.space
    c0 = fraction.n / space.full_size
    ab = np.abs(_all_coefficients(fraction)) ** 2 / c0**2
    orders = _order_grid(space)
    return [float(ab[orders == j].sum()) for j in range(space.m + 1)]


def is_centered(fraction: Fraction, alpha) -> bool:
    c0 = fraction.n / fraction.space.full_size
    return abs(coefficient(fraction, alpha)) < ZERO_TOL * c0


def are_orthogonal(fraction: Fraction, alpha, beta) -> bool:
    space = fraction.space
    alpha = _as_index(alpha, space)
    beta = _as_index(beta, space)
    return is_centered(fraction, alpha.minus(beta, space))


def evaluate_counting_function(table: CoefficientTable, point: Sequence[int]) -> complex:
    """``R(point) = sum_alpha c_alpha X^alpha(point)`` from a coefficient table."""
    space = table.space
    total = 0j
    for alpha, c in table.entries.items():
        term = c
        for a, z, s in zip(alpha, point, space.levels):
            if a:
                term *= _roots(s)[(a * z) % s]
        total += term
    return total


def _projects_factorially(codes: np.ndarray, levels: Sequence[int], subset: Sequence[int]) -> bool:
    cells = math.prod(levels[i] for i in subset)
    n = codes.shape[0]
    if n % cells:
        return False
    counts = Counter(map(tuple, codes[:, list(subset)].tolist()))
    return len(counts) == cells and all(v == n // cells for v in counts.values())


def strength(fraction: Fraction) -> int:
    """Largest ``t`` such that every ``t``-factor projection is a replicated full factorial."""
    codes = fraction.codes
    levels = fraction.space.levels
    t = 0
    for size in range(1, fraction.m + 1):
        if not all(_projects_factorially(codes, levels, sub) for sub in itertools.combinations(range(fraction.m), size)):
            break
        t = size
    return t
