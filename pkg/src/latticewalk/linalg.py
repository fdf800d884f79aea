"""Dense matrices over two scalar fields.

``exact`` matrices are ``flint.fmpq_mat`` (arbitrary precision rationals);
``float`` matrices are numpy ``float64`` arrays. Scalars leaving this
module are ``fractions.Fraction`` or ``float``. Matrices are indexed
``[source][target]`` so that applying ``B`` then ``A`` is ``B @ A``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

import flint
import numpy as np

from .errors import ValidationError

EXACT = "exact"
FLOAT = "float"
BACKENDS = (EXACT, FLOAT)

Matrix = Union[flint.fmpq_mat, np.ndarray]
Scalar = Union[Fraction, float]


def check_backend(backend: str) -> str:
    if backend not in BACKENDS:
        raise ValidationError(f"backend must be one of {BACKENDS}, got {backend!r}")
    return backend


def backend_of(m: Matrix) -> str:
    return FLOAT if isinstance(m, np.ndarray) else EXACT


def to_fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, int):
        return flint.fmpq(x)
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    raise ValidationError(f"exact backend needs rational entries, got {type(x).__name__}")


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, flint.fmpz):
        return Fraction(int(x))
    if isinstance(x, int):
        return Fraction(x)
    raise ValidationError(f"cannot convert {type(x).__name__} to an exact rational")


def scalar(x, backend: str) -> Scalar:
    """Coerce a parameter to the backend's scalar type."""
    if backend == FLOAT:
        return float(x)
    if isinstance(x, float):
        raise ValidationError("exact backend requires rational parameters")
    return to_fraction(x)


def from_entries(rows: int, cols: int, entries: Mapping[tuple[int, int], object], backend: str) -> Matrix:
    if backend == FLOAT:
        m = np.zeros((rows, cols))
        for (i, j), v in entries.items():
            m[i, j] = float(v)
        return m
    m = flint.fmpq_mat(rows, cols)
    for (i, j), v in entries.items():
        m[i, j] = to_fmpq(v)
    return m


def from_rows(rows: Sequence[Sequence[object]], backend: str) -> Matrix:
    r = len(rows)
    c = len(rows[0]) if r else 0
    return from_entries(r, c, {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row)}, backend)


def zeros(rows: int, cols: int, backend: str) -> Matrix:
    return np.zeros((rows, cols)) if backend == FLOAT else flint.fmpq_mat(rows, cols)


def identity(n: int, backend: str) -> Matrix:
    if backend == FLOAT:
        return np.eye(n)
    m = flint.fmpq_mat(n, n)
    for i in range(n):
        m[i, i] = 1
    return m


def diag(values: Sequence[object], backend: str) -> Matrix:
    return from_entries(len(values), len(values), {(i, i): v for i, v in enumerate(values)}, backend)


def shape(m: Matrix) -> tuple[int, int]:
    if isinstance(m, np.ndarray):
        return m.shape
    return m.nrows(), m.ncols()


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if isinstance(a, np.ndarray):
        return a @ b
    return a * b


def chain(mats: Iterable[Matrix]) -> Matrix:
    """Product ``m0 @ m1 @ ...``: apply ``m0`` first."""
    it = iter(mats)
    out = next(it)
    for m in it:
        out = matmul(out, m)
    return out


def scale(m: Matrix, c) -> Matrix:
    if isinstance(m, np.ndarray):
        return m * float(c)
    return m * to_fmpq(c)


def transpose(m: Matrix) -> Matrix:
    return m.T if isinstance(m, np.ndarray) else m.transpose()


def entry(m: Matrix, i: int, j: int) -> Scalar:
    if isinstance(m, np.ndarray):
        return float(m[i, j])
    return to_fraction(m[i, j])


def to_lists(m: Matrix) -> list[list[Scalar]]:
    rows, cols = shape(m)
    if isinstance(m, np.ndarray):
        return [[float(v) for v in row] for row in m]
    flat = m.entries()
    return [[to_fraction(flat[i * cols + j]) for j in range(cols)] for i in range(rows)]


def matrix_power(m: Matrix, r: int) -> Matrix:
    """``m**r`` by repeated squaring."""
    if r < 0:
        raise ValidationError("negative matrix power")
    rows, _ = shape(m)
    result = identity(rows, backend_of(m))
    base = m
    while r:
        if r & 1:
            result = matmul(result, base)
        r >>= 1
        if r:
            base = matmul(base, base)
    return result


def rank(m: Matrix, tol: float = 1e-9) -> int:
    if isinstance(m, np.ndarray):
        return int(np.linalg.matrix_rank(m, tol=tol)) if m.size else 0
    rows, cols = shape(m)
    if rows == 0 or cols == 0:
        return 0
    return int(m.rank())


def is_zero(m: Matrix, tol: float = 0.0) -> bool:
    return max_abs(m) <= tol


def max_abs(m: Matrix) -> Scalar:
    if isinstance(m, np.ndarray):
        return float(np.max(np.abs(m))) if m.size else 0.0
    rows, cols = shape(m)
    if rows == 0 or cols == 0:
        return Fraction(0)
    return max((abs(to_fraction(v)) for v in m.entries()), default=Fraction(0))


def left_nullspace(m: Matrix) -> list[list[Scalar]]:
    """Basis of row vectors ``v`` with ``v @ m == 0`` (exact backend)."""
    rows, cols = shape(m)
    if cols == 0:
        return [[Fraction(int(i == k)) for i in range(rows)] for k in range(rows)]
    # right nullspace of m^T read off its reduced row echelon form
    reduced, rk = transpose(m).rref()
    red = to_lists(reduced)
    pivots = []
    for i in range(rk):
        pivots.append(next(j for j, v in enumerate(red[i]) if v != 0))
    free = [j for j in range(rows) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * rows
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][f]
        basis.append(v)
    return basis


def vector_times(v: Sequence[object], m: Matrix) -> list[Scalar]:
    row = from_rows([list(v)], backend_of(m))
    return to_lists(matmul(row, m))[0]


def row_sums(m: Matrix) -> list[Scalar]:
    return [sum(row) for row in to_lists(m)]
