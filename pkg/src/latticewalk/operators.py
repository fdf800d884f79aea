"""Down/up kernels, composed chains and the weighted U/D operators.

Matrices are indexed ``[source][target]``; the operator word ``UD_n``
(apply ``D_n`` first, then ``U_{n-1}``) is the matrix product
``D_n @ U_{n-1}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import lattices as lat
from . import linalg as la
from .errors import ValidationError
from .lattices import LatticeFamily
from .linalg import EXACT, FLOAT, Matrix
from .measures import MeasureSpec, PlancherelLimit, check_compatible, measure_at_level

DOWN_UP = "down_up"
UP_DOWN = "up_down"


@dataclass(frozen=True)
class LevelOperator:
    source_level: int
    target_level: int
    source_states: tuple
    target_states: tuple
    matrix: Matrix

    def __matmul__(self, other: "LevelOperator") -> "LevelOperator":
        """``self @ other`` applies ``self`` first."""
        if self.target_level != other.source_level:
            raise ValidationError("operator levels do not chain")
        return LevelOperator(
            self.source_level, other.target_level, self.source_states, other.target_states,
            la.matmul(self.matrix, other.matrix),
        )

    def entry(self, source, target):
        return la.entry(self.matrix, self.source_states.index(source), self.target_states.index(target))


@dataclass(frozen=True)
class ChainKernel:
    family: LatticeFamily
    spec: MeasureSpec
    level: int
    order: str
    states: tuple
    matrix: Matrix
    pi: tuple

    @property
    def backend(self) -> str:
        return la.backend_of(self.matrix)

    @property
    def size(self) -> int:
        return len(self.states)

    def is_row_stochastic(self, tol: float = 1e-12) -> bool:
        sums = la.row_sums(self.matrix)
        if self.backend == EXACT:
            return all(s == 1 for s in sums)
        return all(abs(s - 1) <= tol for s in sums)

    def reversibility_defect(self):
        """``max |pi(x) K(x,y) - pi(y) K(y,x)|``."""
        rows = la.to_lists(self.matrix)
        pi = self.pi
        return max(
            (abs(pi[i] * rows[i][j] - pi[j] * rows[j][i]) for i in range(self.size) for j in range(i + 1, self.size)),
            default=0 * pi[0],
        )


@dataclass(frozen=True)
class CommutationFit:
    a: object
    b: object
    residual: object


def _pi_list(spec, family, n, backend):
    return list(measure_at_level(spec, family, n, backend).values())


def step_kernel(family: LatticeFamily, spec: MeasureSpec, n: int, direction: str, backend: str = EXACT) -> LevelOperator:
    """The down chain from level ``n`` to ``n - 1`` or the up chain from ``n`` to ``n + 1``."""
    la.check_backend(backend)
    check_compatible(spec, family)
    if direction == "down":
        if n < 1:
            raise ValidationError("down kernel needs level n >= 1")
        lo, hi = n - 1, n
    elif direction == "up":
        lo, hi = n, n + 1
    else:
        raise ValidationError(f"direction must be 'down' or 'up', got {direction!r}")
    d_lo = lat.level_dimensions(family, lo)
    d_hi = lat.level_dimensions(family, hi)
    lo_states = tuple(lat.level_states(family, lo))
    hi_states = tuple(lat.level_states(family, hi))
    entries = {}
    if direction == "down":
        for cov in lat.cover_relations(family, lo):
            i, j = cov.lower_index, cov.upper_index
            entries[j, i] = la.scalar(Fraction(d_lo[i] * cov.multiplicity, d_hi[j]), EXACT)
        rows, cols = len(hi_states), len(lo_states)
        return LevelOperator(hi, lo, hi_states, lo_states, la.from_entries(rows, cols, entries, backend))
    m_lo = _pi_list(spec, family, lo, backend)
    m_hi = _pi_list(spec, family, hi, backend)
    for cov in lat.cover_relations(family, lo):
        i, j = cov.lower_index, cov.upper_index
        entries[i, j] = m_hi[j] / m_lo[i] * d_lo[i] * cov.multiplicity / d_hi[j]
    return LevelOperator(lo, hi, lo_states, hi_states, la.from_entries(len(lo_states), len(hi_states), entries, backend))


def _check_finite_level(family: LatticeFamily, n: int) -> None:
    if family.is_finite and not 0 < 2 * n <= family.ambient:
        raise ValidationError(f"{family} chains need 0 < 2j <= {family.ambient}, got j = {n}")


def composed_kernel(family: LatticeFamily, spec: MeasureSpec, n: int, order: str = DOWN_UP,
                    backend: str = EXACT) -> ChainKernel:
    """Down-up (``D`` then ``U``) or up-down chain on level ``n``."""
    _check_finite_level(family, n)
    if order == DOWN_UP:
        if n < 1:
            raise ValidationError("down-up chain needs n >= 1")
        op = step_kernel(family, spec, n, "down", backend) @ step_kernel(family, spec, n - 1, "up", backend)
    elif order == UP_DOWN:
        op = step_kernel(family, spec, n, "up", backend) @ step_kernel(family, spec, n + 1, "down", backend)
    else:
        raise ValidationError(f"order must be {DOWN_UP!r} or {UP_DOWN!r}")
    pi = tuple(_pi_list(spec, family, n, backend))
    return ChainKernel(family, spec, n, order, op.source_states, op.matrix, pi)


def _unit_operator(family, n, direction, weight, backend) -> LevelOperator:
    """Cover-indicator operator with ``weight(lower_state, upper_state)`` on each edge."""
    if direction == "down" and n == 0:
        states = tuple(lat.level_states(family, 0))
        return LevelOperator(0, -1, states, (), la.zeros(1, 0, backend))
    lo = n - 1 if direction == "down" else n
    lo_states = tuple(lat.level_states(family, lo))
    hi_states = tuple(lat.level_states(family, lo + 1))
    entries = {}
    for cov in lat.cover_relations(family, lo):
        i, j = cov.lower_index, cov.upper_index
        w = weight(lo_states[i], hi_states[j])
        if direction == "down":
            entries[j, i] = w
        else:
            entries[i, j] = w
    if direction == "down":
        return LevelOperator(lo + 1, lo, hi_states, lo_states, la.from_entries(len(hi_states), len(lo_states), entries, backend))
    return LevelOperator(lo, lo + 1, lo_states, hi_states, la.from_entries(len(lo_states), len(hi_states), entries, backend))


def _added_box_content(lower, upper) -> int:
    row = next(i for i in range(len(upper)) if i >= len(lower) or upper[i] != lower[i])
    return upper[row] - (row + 1)


def algebraic_up(family: LatticeFamily, spec: MeasureSpec, n: int, backend: str = EXACT) -> LevelOperator:
    """Weighted ``U_n`` from level ``n`` to ``n + 1``."""
    la.check_backend(backend)
    check_compatible(spec, family)
    kind = family.kind
    one = la.scalar(1, backend)
    if kind in ("kingman", "pascal"):
        return step_kernel(family, spec, n, "up", backend)
    if kind == "young":
        if isinstance(spec, PlancherelLimit):
            return _unit_operator(family, n, "up", lambda lo, hi: one, backend)
        denom = la.scalar(spec.s2, backend) + n
        return _unit_operator(
            family, n, "up", lambda lo, hi: spec.content_factor(_added_box_content(lo, hi), backend) / denom, backend
        )
    if kind == "schur":
        return _unit_operator(family, n, "up", lambda lo, hi: 2 * one if len(hi) == len(lo) else one, backend)
    N = family.ambient
    if n >= N:
        raise ValidationError(f"U_{n} is undefined on {family}")
    if kind == "boolean":
        w = one / (N - n)
    else:
        w = one * (family.q - 1) / (family.q ** (N - n) - 1)
    return _unit_operator(family, n, "up", lambda lo, hi: w, backend)


def algebraic_down(family: LatticeFamily, spec: MeasureSpec, n: int, backend: str = EXACT) -> LevelOperator:
    """Weighted ``D_n`` from level ``n`` to ``n - 1`` (a ``p_0 x 0`` matrix at ``n = 0``)."""
    la.check_backend(backend)
    check_compatible(spec, family)
    one = la.scalar(1, backend)
    if n == 0:
        return _unit_operator(family, 0, "down", None, backend)
    kind = family.kind
    if kind in ("kingman", "pascal"):
        return step_kernel(family, spec, n, "down", backend)
    if kind == "boolean":
        w = one / n
    elif kind == "subspace":
        w = one * (family.q - 1) / (family.q ** n - 1)
    else:
        w = one
    return _unit_operator(family, n, "down", lambda lo, hi: w, backend)


def algebraic_operators(family: LatticeFamily, spec: MeasureSpec, n: int, backend: str = EXACT) -> tuple[LevelOperator, LevelOperator]:
    """``(U_n, D_n)`` satisfying the family's commutation relation."""
    return algebraic_up(family, spec, n, backend), algebraic_down(family, spec, n, backend)


def commutation_coefficients(family: LatticeFamily, spec: MeasureSpec, n: int, backend: str = EXACT):
    """Registered ``(a_n, b_n)`` with ``D_{n+1} U_n = a_n U_{n-1} D_n + b_n I_n``."""
    kind = family.kind
    one = la.scalar(1, backend)
    if kind == "young":
        if isinstance(spec, PlancherelLimit):
            return one, one
        s2 = la.scalar(spec.s2, backend)
        return one - one / (s2 + n), one + n / (s2 + n)
    if kind == "schur":
        return one, one
    if kind == "kingman":
        theta = la.scalar(spec.theta, backend)
        a = n * (theta + n - 1) / ((n + 1) * (theta + n))
    elif kind == "pascal":
        a = one * n / (n + 1)
    elif kind == "boolean":
        N = family.ambient
        a = one * n * (N - n + 1) / ((n + 1) * (N - n))
    else:
        N, q = family.ambient, family.q
        a = one * (q ** (N - n + 1) - 1) * (q ** n - 1) / ((q ** (N - n) - 1) * (q ** (n + 1) - 1))
    return a, one - a


def kernel_scale(family: LatticeFamily, n: int):
    """Factor turning the algebraic ``UD_n`` into the down-up kernel (after conjugation)."""
    return Fraction(1, n) if family.kind in ("young", "schur") else Fraction(1)


def conjugated(family: LatticeFamily, n: int, word: Matrix, factor) -> Matrix:
    """``factor * A word A^{-1}`` with ``A = diag(d)``, as a ``[source][target]`` matrix.

    The coefficient of ``y`` in ``A W A^{-1}(x)`` is ``W[x, y] d_y / d_x``.
    For families whose operators are already probabilistic ``A`` is skipped.
    """
    backend = la.backend_of(word)
    if family.kind not in ("young", "schur"):
        return la.scale(word, factor)
    d = lat.level_dimensions(family, n)
    left = la.diag([Fraction(1, x) for x in d], backend)
    right = la.diag(d, backend)
    return la.scale(la.chain([left, word, right]), factor)


def _pair(family, spec, n, backend):
    """``(UD_n, DU_n)`` as level-``n`` square matrices."""
    up_n = algebraic_up(family, spec, n, backend)
    if n == 0:
        size = la.shape(up_n.matrix)[0]
        ud = la.zeros(size, size, backend)
    else:
        ud = la.matmul(algebraic_down(family, spec, n, backend).matrix, algebraic_up(family, spec, n - 1, backend).matrix)
    du = la.matmul(up_n.matrix, algebraic_down(family, spec, n + 1, backend).matrix)
    return ud, du


def verify_commutation(family: LatticeFamily, spec: MeasureSpec, n: int, backend: str = EXACT) -> CommutationFit:
    """Residual of the registered commutation relation at level ``n``."""
    ud, du = _pair(family, spec, n, backend)
    a, b = commutation_coefficients(family, spec, n, backend)
    size = la.shape(du)[0]
    residual = la.max_abs(du - la.scale(ud, a) - la.scale(la.identity(size, backend), b))
    return CommutationFit(a, b, residual)


def fit_commutation(family: LatticeFamily, spec: MeasureSpec, n: int) -> CommutationFit:
    """Least-squares ``(a_n, b_n)`` in float arithmetic, without using the registry."""
    ud, du = _pair(family, spec, n, FLOAT)
    size = du.shape[0]
    design = np.column_stack([ud.ravel(), np.eye(size).ravel()])
    (a, b), *_ = np.linalg.lstsq(design, du.ravel(), rcond=None)
    residual = float(np.max(np.abs(du - a * ud - b * np.eye(size))))
    return CommutationFit(float(a), float(b), residual)


def downup_from_algebraic(family: LatticeFamily, spec: MeasureSpec, n: int, backend: str = EXACT) -> Matrix:
    """The down-up kernel rebuilt as ``kernel_scale * A (UD)_n A^{-1}``."""
    ud, _ = _pair(family, spec, n, backend)
    return conjugated(family, n, ud, kernel_scale(family, n))


def updown_from_algebraic(family: LatticeFamily, spec: MeasureSpec, n: int, backend: str = EXACT) -> Matrix:
    """The up-down kernel as ``kernel_scale(n+1) * A (DU)_n A^{-1}``."""
    _, du = _pair(family, spec, n, backend)
    return conjugated(family, n, du, kernel_scale(family, n + 1))


def word(family: LatticeFamily, spec: MeasureSpec, n: int, letters: str, backend: str = EXACT) -> Matrix:
    """Matrix of a word in ``U`` and ``D`` acting on level ``n``, read right to left.

    ``word(..., "UD")`` is ``UD_n``; ``word(..., "DDU")`` is ``D^2 U_n``.
    """
    level = n
    mats = []
    for letter in reversed(letters):
        if letter == "U":
            mats.append(algebraic_up(family, spec, level, backend).matrix)
            level += 1
        elif letter == "D":
            mats.append(algebraic_down(family, spec, level, backend).matrix)
            level -= 1
        else:
            raise ValidationError(f"bad operator letter {letter!r}")
    if not mats:
        return la.identity(lat.level_size(family, n), backend)
    return la.chain(mats)
