"""Domain types: design spaces, runs, fractions and exact GWLP vectors.

Level codes are plain integers ``0 .. s_j - 1``. Complex roots of unity only
appear in :mod:`oagwlp.counting`; everything else works on integer codes.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction as Q
from typing import Iterable, Sequence

import numpy as np

from .errors import StructuralError

__all__ = [
    "DesignSpace",
    "Run",
    "Fraction",
    "GwlpExact",
    "Ordering",
    "gma_compare",
    "gma_key",
]


@dataclass(frozen=True)
class DesignSpace:
    """Full factorial grid with ``m`` factors at ``levels[j]`` levels each."""

    levels: tuple[int, ...]
    full_size: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        levels = tuple(int(s) for s in self.levels)
        if not levels:
            raise StructuralError("a design space needs at least one factor")
        if any(s < 2 for s in levels):
            raise StructuralError(f"every factor needs at least 2 levels, got {levels}")
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "full_size", math.prod(levels))

    @property
    def m(self) -> int:
        return len(self.levels)

    def describe(self) -> str:
        """Level structure in exponent notation, e.g. ``2^1 3^3``."""
        counts = Counter(self.levels)
        return " ".join(f"{s}^{counts[s]}" for s in sorted(counts))

    def validate(self, codes: Sequence[int]) -> None:
        if len(codes) != self.m:
            raise StructuralError(f"expected {self.m} codes, got {len(codes)}")
        for j, (c, s) in enumerate(zip(codes, self.levels)):
            if not 0 <= c < s:
                raise StructuralError(f"code {c} out of range for factor {j + 1} with {s} levels")


@dataclass(frozen=True)
class Run:
    """One design point given by its level codes."""

    codes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "codes", tuple(int(c) for c in self.codes))

    def __len__(self):
        return len(self.codes)

    def __iter__(self):
        return iter(self.codes)


@dataclass(frozen=True)
class Fraction:
    """A multiset of runs over a design space.

    Runs keep their input order; replicated points occupy distinct positions,
    so the 1-based run index ``i`` always refers to the same row.
    """

    space: DesignSpace
    runs: tuple[Run, ...]

    def __post_init__(self):
        runs = tuple(r if isinstance(r, Run) else Run(r) for r in self.runs)
        if not runs:
            raise StructuralError("a fraction needs at least one run")
        for r in runs:
            self.space.validate(r.codes)
        object.__setattr__(self, "runs", runs)

    @classmethod
    def from_codes(cls, levels: Iterable[int], rows: Iterable[Iterable[int]]) -> "Fraction":
        return cls(DesignSpace(tuple(levels)), tuple(Run(tuple(r)) for r in rows))

    @property
    def n(self) -> int:
        return len(self.runs)

    @property
    def m(self) -> int:
        return self.space.m

    @property
    def codes(self) -> np.ndarray:
        """``(n, m)`` integer array of level codes (a fresh copy)."""
        return np.array([r.codes for r in self.runs], dtype=np.int64).reshape(self.n, self.m)

    def multiplicities(self) -> dict[Run, int]:
        """Distinct points in first-appearance order with their replication counts."""
        return dict(Counter(self.runs))

    def without(self, indices: Iterable[int]) -> "Fraction":
        """Remove one copy per 1-based run index."""
        drop = set(indices)
        for i in drop:
            if not 1 <= i <= self.n:
                raise StructuralError(f"run index {i} out of range 1..{self.n}")
        return Fraction(self.space, tuple(r for i, r in enumerate(self.runs, 1) if i not in drop))

    def subset(self, indices: Iterable[int]) -> "Fraction":
        """Sub-fraction made of the given 1-based run indices, in the given order."""
        return Fraction(self.space, tuple(self.runs[i - 1] for i in indices))

    def __add__(self, other: "Fraction") -> "Fraction":
        if other.space != self.space:
            raise StructuralError("cannot join fractions over different design spaces")
        return Fraction(self.space, self.runs + other.runs)


@dataclass(frozen=True)
class GwlpExact:
    """GWLP ``(A_0, ..., A_m)`` stored as integer numerators over ``n**2``."""

    numerators: tuple[int, ...]
    denominator: int
    size_n: int

    def __post_init__(self):
        object.__setattr__(self, "numerators", tuple(int(v) for v in self.numerators))
        if self.denominator <= 0:
            raise StructuralError("denominator must be positive")

    @classmethod
    def from_numerators(cls, numerators: Sequence[int], n: int) -> "GwlpExact":
        return cls(tuple(numerators), n * n, n)

    def __len__(self):
        return len(self.numerators)

    def __getitem__(self, j: int) -> Q:
        return Q(self.numerators[j], self.denominator)

    @property
    def values(self) -> tuple[Q, ...]:
        return tuple(Q(v, self.denominator) for v in self.numerators)

    def as_floats(self) -> tuple[float, ...]:
        return tuple(v / self.denominator for v in self.numerators)


class Ordering(enum.Enum):
    FIRST_BETTER = "first"
    SECOND_BETTER = "second"
    EQUAL = "equal"


def gma_compare(g1: GwlpExact, g2: GwlpExact) -> Ordering:
    """Compare two GWLPs under generalized minimum aberration.

    The first index at which the patterns differ decides; the smaller value wins.
    Entries are compared by cross-multiplying numerators, so ties are exact.
    """
    if len(g1) != len(g2):
        raise StructuralError(f"GWLP lengths differ: {len(g1)} vs {len(g2)}")
    d1, d2 = g1.denominator, g2.denominator
    for a, b in zip(g1.numerators, g2.numerators):
        lhs, rhs = a * d2, b * d1
        if lhs < rhs:
            return Ordering.FIRST_BETTER
        if lhs > rhs:
            return Ordering.SECOND_BETTER
    return Ordering.EQUAL


def gma_key(g: GwlpExact) -> tuple[Q, ...]:
    """Sort key that orders GWLPs from best to worst."""
    return g.values
