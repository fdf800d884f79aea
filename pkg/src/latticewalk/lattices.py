"""The branching diagrams: graded state sets with weighted cover relations.

Six families are supported. Young and Kingman share the poset of all
partitions and differ only in the multiplicity attached to each cover;
Schur is the sub-poset of strict partitions; Pascal has levels
``{(x, n) : 0 <= x <= n}``; Boolean and subspace lattices are the subsets
of ``{1..N}`` and the subspaces of ``F_q^N``.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from math import comb, factorial
from typing import Union

from . import partitions as parts_mod
from .errors import CapacityError, LatticeWalkError, ValidationError
from .partitions import Partition

DEFAULT_MAX_STATES = 20000


def max_states() -> int:
    """Enumeration cap, overridable through ``LATTICEWALK_MAX_STATES``."""
    return int(os.environ.get("LATTICEWALK_MAX_STATES", DEFAULT_MAX_STATES))


@dataclass(frozen=True)
class LatticeFamily:
    kind: str
    ambient: int | None = None
    q: int | None = None

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ValidationError(f"unknown lattice family {self.kind!r}")
        if self.kind in ("boolean", "subspace"):
            if self.ambient is None or self.ambient < 1:
                raise ValidationError(f"{self.kind} lattice needs a positive ambient dimension")
        if self.kind == "subspace":
            if self.q not in (2, 3):
                raise ValidationError(f"subspace lattice needs q prime <= 3, got {self.q}")
            if self.ambient > 6:
                raise CapacityError(f"subspace lattice limited to ambient dimension <= 6, got {self.ambient}")

    def __str__(self) -> str:
        if self.kind == "boolean":
            return f"boolean({self.ambient})"
        if self.kind == "subspace":
            return f"subspace({self.ambient},q={self.q})"
        return self.kind

    @property
    def is_partition_family(self) -> bool:
        return self.kind in ("young", "kingman", "schur")

    @property
    def is_finite(self) -> bool:
        return self.kind in ("boolean", "subspace")


FAMILY_KINDS = ("young", "kingman", "schur", "pascal", "boolean", "subspace")


def young() -> LatticeFamily:
    return LatticeFamily("young")


def kingman() -> LatticeFamily:
    return LatticeFamily("kingman")


def schur() -> LatticeFamily:
    return LatticeFamily("schur")


def pascal() -> LatticeFamily:
    return LatticeFamily("pascal")


def boolean(ambient: int) -> LatticeFamily:
    return LatticeFamily("boolean", ambient=ambient)


def subspace(ambient: int, q: int = 2) -> LatticeFamily:
    return LatticeFamily("subspace", ambient=ambient, q=q)


@dataclass(frozen=True)
class Subset:
    """A subset of ``{1..ambient}`` stored as a bitmask over 0-based elements."""

    mask: int
    ambient: int

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in range(self.ambient) if self.mask >> i & 1)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def label(self) -> str:
        return "{" + ",".join(map(str, self.elements)) + "}"

    __str__ = label


@dataclass(frozen=True)
class Subspace:
    """A subspace of ``F_q^N`` given by its reduced row echelon basis."""

    rows: tuple[tuple[int, ...], ...]
    q: int

    @property
    def dim(self) -> int:
        return len(self.rows)

    def label(self) -> str:
        return "[" + "|".join("".join(map(str, r)) for r in self.rows) + "]"

    __str__ = label


@dataclass(frozen=True)
class PascalPoint:
    x: int
    n: int

    def label(self) -> str:
        return f"({self.x},{self.n})"

    __str__ = label


State = Union[Partition, Subset, Subspace, PascalPoint]


@dataclass(frozen=True)
class WeightedCover:
    lower_index: int
    upper_index: int
    multiplicity: int


def state_label(state: State) -> str:
    return state.label()


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def q_factorial(j: int, q: int) -> int:
    out = 1
    for i in range(1, j + 1):
        out *= (q ** i - 1) // (q - 1)
    return out


def level_size(family: LatticeFamily, n: int) -> int:
    """Closed-form count of states at level ``n``."""
    if n < 0:
        return 0
    kind = family.kind
    if kind in ("young", "kingman"):
        return parts_mod.partition_count(n)
    if kind == "schur":
        return parts_mod.partition_count(n, distinct_only=True)
    if kind == "pascal":
        return n + 1
    if kind == "boolean":
        return comb(family.ambient, n) if n <= family.ambient else 0
    return gaussian_binomial(family.ambient, n, family.q)


def _check_capacity(family: LatticeFamily, n: int) -> None:
    size = level_size(family, n)
    if size > max_states():
        raise CapacityError(f"level {n} of {family} has {size} states (cap {max_states()})")


def rref_mod(vectors, q: int) -> tuple[tuple[int, ...], ...]:
    """Reduced row echelon basis of the span of ``vectors`` over F_q."""
    rows = [list(v) for v in vectors]
    width = len(rows[0]) if rows else 0
    out: list[list[int]] = []
    col = 0
    while rows and col < width:
        pivot = next((r for r in rows if r[col] % q), None)
        if pivot is None:
            col += 1
            continue
        rows.remove(pivot)
        inv = pow(pivot[col], -1, q)
        pivot = [(x * inv) % q for x in pivot]
        rows = [[(a - r[col] * b) % q for a, b in zip(r, pivot)] for r in rows]
        out = [[(a - r[col] * b) % q for a, b in zip(r, pivot)] for r in out]
        out.append(pivot)
        rows = [r for r in rows if any(r)]
        col += 1
    return tuple(tuple(r) for r in out)


def _subspaces(ambient: int, q: int, j: int) -> list[Subspace]:
    out = []
    for pivots in combinations(range(ambient), j):
        free = [(r, c) for r, p in enumerate(pivots) for c in range(p + 1, ambient) if c not in pivots]
        for values in product(range(q), repeat=len(free)):
            rows = [[0] * ambient for _ in pivots]
            for r, p in enumerate(pivots):
                rows[r][p] = 1
            for (r, c), v in zip(free, values):
                rows[r][c] = v
            out.append(Subspace(tuple(tuple(r) for r in rows), q))
    return out


@lru_cache(maxsize=None)
def _level_states(family: LatticeFamily, n: int) -> tuple[State, ...]:
    kind = family.kind
    if kind in ("young", "kingman"):
        return tuple(parts_mod.enumerate_partitions(n))
    if kind == "schur":
        return tuple(parts_mod.enumerate_partitions(n, distinct_only=True))
    if kind == "pascal":
        return tuple(PascalPoint(x, n) for x in range(n + 1))
    if kind == "boolean":
        return tuple(
            Subset(sum(1 << e for e in elems), family.ambient)
            for elems in combinations(range(family.ambient), n)
        )
    return tuple(_subspaces(family.ambient, family.q, n))


def level_states(family: LatticeFamily, n: int) -> list[State]:
    """States of level ``n`` in canonical order."""
    if n < 0:
        raise ValidationError(f"level must be non-negative, got {n}")
    if family.is_finite and n > family.ambient:
        raise ValidationError(f"level {n} exceeds rank {family.ambient} of {family}")
    _check_capacity(family, n)
    return list(_level_states(family, n))


@lru_cache(maxsize=None)
def _index(family: LatticeFamily, n: int) -> dict:
    return {s: i for i, s in enumerate(_level_states(family, n))}


def state_index(family: LatticeFamily, n: int) -> dict:
    level_states(family, n)
    return _index(family, n)


def _upper_neighbours(family: LatticeFamily, state: State) -> list[tuple[State, int]]:
    kind = family.kind
    if kind in ("young", "kingman", "schur"):
        out = []
        for bigger, row in state.upper_covers():
            if kind == "schur" and not bigger.is_strict():
                continue
            kappa = bigger.multiplicity(bigger[row]) if kind == "kingman" else 1
            out.append((bigger, kappa))
        return out
    if kind == "pascal":
        return [(PascalPoint(state.x, state.n + 1), 1), (PascalPoint(state.x + 1, state.n + 1), 1)]
    if kind == "boolean":
        return [
            (Subset(state.mask | 1 << e, state.ambient), 1)
            for e in range(state.ambient)
            if not state.mask >> e & 1
        ]
    # one new vector per line of the coordinate complement to the pivot columns
    q, ambient = state.q, family.ambient
    pivots = {next(c for c, v in enumerate(r) if v) for r in state.rows}
    free_cols = [c for c in range(ambient) if c not in pivots]
    out = []
    for values in product(range(q), repeat=len(free_cols)):
        nz = next((v for v in values if v), 0)
        if nz != 1:
            continue
        v = [0] * ambient
        for c, x in zip(free_cols, values):
            v[c] = x
        out.append((Subspace(rref_mod(list(state.rows) + [v], q), q), 1))
    return out


@lru_cache(maxsize=None)
def _covers(family: LatticeFamily, n: int) -> tuple[WeightedCover, ...]:
    lower = _level_states(family, n)
    upper_index = _index(family, n + 1)
    out = []
    for i, s in enumerate(lower):
        for t, kappa in _upper_neighbours(family, s):
            out.append(WeightedCover(i, upper_index[t], kappa))
    return tuple(out)


def cover_relations(family: LatticeFamily, n: int) -> list[WeightedCover]:
    """Weighted edges from level ``n`` to level ``n + 1``."""
    level_states(family, n)
    level_states(family, n + 1)
    return list(_covers(family, n))


@lru_cache(maxsize=None)
def _dimensions(family: LatticeFamily, n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    below = _dimensions(family, n - 1)
    dims = [0] * len(_level_states(family, n))
    for cov in _covers(family, n - 1):
        dims[cov.upper_index] += cov.multiplicity * below[cov.lower_index]
    return tuple(dims)


def level_dimensions(family: LatticeFamily, n: int) -> list[int]:
    """Path-counting dimensions of every state at level ``n``."""
    for k in range(n + 1):
        level_states(family, k)
    return list(_dimensions(family, n))


def state_level(family: LatticeFamily, state: State) -> int:
    if isinstance(state, Partition):
        return state.n
    if isinstance(state, PascalPoint):
        return state.n
    if isinstance(state, Subset):
        return len(state)
    return state.dim


def path_dimension(family: LatticeFamily, state: State) -> int:
    """Weighted count of maximal paths from the bottom vertex to ``state``."""
    n = state_level(family, state)
    idx = state_index(family, n)
    if state not in idx:
        raise ValidationError(f"{state} is not a state of {family}")
    return level_dimensions(family, n)[idx[state]]


def closed_dimension(family: LatticeFamily, state: State) -> int:
    """Closed-form dimension where one is known."""
    kind = family.kind
    if family.is_partition_family:
        return parts_mod.closed_form_dimension(kind, state)
    if kind == "pascal":
        return comb(state.n, state.x)
    if kind == "boolean":
        return factorial(len(state))
    return q_factorial(state.dim, family.q)


def _support_graph(kernel) -> list[list[int]]:
    from .linalg import to_lists

    return [[j for j, v in enumerate(row) if v != 0] for row in to_lists(kernel.matrix)]


def _bfs(adj: list[list[int]], source: int) -> list[int]:
    dist = [-1] * len(adj)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def graph_distance(kernel, x: State, y: State) -> int:
    """Least ``r`` with ``K^r(x, y) > 0``."""
    idx = {s: i for i, s in enumerate(kernel.states)}
    d = _bfs(_support_graph(kernel), idx[x])[idx[y]]
    if d < 0:
        raise LatticeWalkError(f"{y} unreachable from {x}: kernel is not ergodic")
    return d


def diameter(kernel) -> int:
    n_states = len(kernel.states)
    if n_states > max_states():
        raise CapacityError(f"diameter limited to {max_states()} states")
    adj = _support_graph(kernel)
    best = 0
    for s in range(n_states):
        d = _bfs(adj, s)
        if min(d) < 0:
            raise LatticeWalkError("kernel is not ergodic")
        best = max(best, max(d))
    return best
