"""Integer partitions and their combinatorial statistics.

Partitions are the states of the Young, Kingman and Schur lattices. All
enumerations use reverse lexicographic order on part lists, so ``(4)``
comes first and ``(1, 1, 1, 1)`` last.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Iterator

from .errors import ValidationError

YOUNG = "young"
KINGMAN = "kingman"
SCHUR = "schur"
DIMENSION_KINDS = (YOUNG, KINGMAN, SCHUR)


@dataclass(frozen=True, order=False)
class Partition:
    """A weakly decreasing tuple of positive integers."""

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if any(p < 1 for p in parts):
            raise ValidationError(f"parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValidationError(f"parts must be weakly decreasing: {parts}")

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(parts))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Read ``"3+1"``, ``"0"``/``""`` (empty) or the JSON form ``"[3,1]"``."""
        text = text.strip()
        if text.startswith("["):
            return cls(tuple(json.loads(text)))
        if text in ("", "0"):
            return cls(())
        return cls(tuple(sorted((int(p) for p in text.split("+")), reverse=True)))

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __str__(self) -> str:
        return self.label()

    def label(self) -> str:
        return "+".join(map(str, self.parts)) if self.parts else "0"

    def to_json(self) -> list[int]:
        return list(self.parts)

    def sort_key(self):
        """Key putting partitions in reverse lexicographic order."""
        return tuple(-p for p in self.parts) + (0,)

    def multiplicity(self, i: int) -> int:
        """Number of parts equal to ``i``."""
        return self.parts.count(i)

    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for p in self.parts:
            out[p] = out.get(p, 0) + 1
        return out

    def is_strict(self) -> bool:
        return all(self.parts[i] > self.parts[i + 1] for i in range(len(self.parts) - 1))

    def is_odd(self) -> bool:
        return all(p % 2 == 1 for p in self.parts)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0])))

    def cells(self) -> Iterator[tuple[int, int]]:
        """Boxes ``(i, j)`` with 1-based row ``i`` and column ``j``."""
        for i, p in enumerate(self.parts, start=1):
            for j in range(1, p + 1):
                yield i, j

    def contents(self) -> list[int]:
        return [j - i for i, j in self.cells()]

    def hook_lengths(self) -> list[int]:
        conj = self.conjugate().parts
        return [self.parts[i - 1] - j + conj[j - 1] - i + 1 for i, j in self.cells()]

    def z(self) -> int:
        """Centralizer size ``prod_i i^{m_i} m_i!``."""
        return prod(i ** m * factorial(m) for i, m in self.multiplicities().items())

    def add_box(self, row: int) -> "Partition | None":
        """Add a box at the end of 0-based ``row`` (``row == len`` opens a row)."""
        parts = list(self.parts)
        if row == len(parts):
            parts.append(1)
        elif row == 0 or parts[row - 1] > parts[row]:
            parts[row] += 1
        else:
            return None
        return Partition(tuple(parts))

    def remove_box(self, row: int) -> "Partition | None":
        parts = list(self.parts)
        if row == len(parts) - 1 or parts[row] > parts[row + 1]:
            parts[row] -= 1
            return Partition(tuple(p for p in parts if p > 0))
        return None

    def upper_covers(self) -> list[tuple["Partition", int]]:
        """Partitions obtained by adding one box, with the row index used."""
        out = []
        for row in range(len(self.parts) + 1):
            bigger = self.add_box(row)
            if bigger is not None:
                out.append((bigger, row))
        return out

    def lower_covers(self) -> list[tuple["Partition", int]]:
        out = []
        for row in range(len(self.parts)):
            smaller = self.remove_box(row)
            if smaller is not None:
                out.append((smaller, row))
        return out


def _partitions_bounded(n: int, largest: int, distinct: bool) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        nxt = first - 1 if distinct else first
        for rest in _partitions_bounded(n - first, nxt, distinct):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _enumerate(n: int, distinct_only: bool) -> tuple[Partition, ...]:
    return tuple(Partition(p) for p in _partitions_bounded(n, n, distinct_only))


def enumerate_partitions(n: int, distinct_only: bool = False) -> list[Partition]:
    """All partitions of ``n`` in reverse lexicographic order."""
    if n < 0:
        raise ValidationError(f"n must be non-negative, got {n}")
    return list(_enumerate(n, distinct_only))


def odd_partitions(n: int) -> list[Partition]:
    return [p for p in _enumerate(n, False) if p.is_odd()]


@lru_cache(maxsize=None)
def partition_count(n: int, distinct_only: bool = False) -> int:
    """p(n), or p*(n) when ``distinct_only``; zero for negative n."""
    if n < 0:
        return 0
    # coin-change table; parts used at most once in the distinct case
    table = [1] + [0] * n
    for part in range(1, n + 1):
        rng = range(n, part - 1, -1) if distinct_only else range(part, n + 1)
        for total in rng:
            table[total] += table[total - part]
    return table[n]


def young_dimension(lam: Partition) -> int:
    """Number of standard Young tableaux, by the hook length formula."""
    return factorial(lam.n) // prod(lam.hook_lengths())


def kingman_dimension(lam: Partition) -> int:
    return factorial(lam.n) // prod(factorial(p) for p in lam.parts)


def shifted_dimension(lam: Partition) -> int:
    """g_lambda, the number of standard shifted tableaux of strict shape."""
    if not lam.is_strict():
        raise ValidationError(f"schur dimension needs distinct parts: {lam.parts}")
    value = Fraction(factorial(lam.n), prod(factorial(p) for p in lam.parts))
    parts = lam.parts
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            value *= Fraction(parts[i] - parts[j], parts[i] + parts[j])
    assert value.denominator == 1
    return value.numerator


def closed_form_dimension(kind: str, lam: Partition) -> int:
    if kind == YOUNG:
        return young_dimension(lam)
    if kind == KINGMAN:
        return kingman_dimension(lam)
    if kind == SCHUR:
        return shifted_dimension(lam)
    raise ValidationError(f"unknown dimension kind {kind!r}")
