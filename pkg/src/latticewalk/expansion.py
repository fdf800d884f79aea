"""Expanding ``(UD)_n^r`` in the words ``(U^k D^k)_n``.

The coefficients ``A_n(r, k)`` depend only on the commutation data
``(a_j, b_j)``. Two routes compute them: the row recurrence and the
power-series expansion of the column generating functions ``F_k(x)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterator, Sequence

from . import linalg as la
from .lattices import LatticeFamily
from .measures import MeasureSpec
from .operators import commutation_coefficients, word


_STIRLING_ROWS: list[list[int]] = [[1]]


def stirling2(r: int, k: int) -> int:
    """Stirling number of the second kind: set partitions of ``r`` items into ``k`` blocks."""
    if r < 0 or k < 0:
        raise ValueError("stirling2 needs non-negative arguments")
    if k > r:
        return 0
    rows = _STIRLING_ROWS
    while len(rows) <= r:
        prev, m = rows[-1], len(rows)
        rows.append([(prev[i - 1] if i else 0) + (i * prev[i] if i < m else 0) for i in range(m + 1)])
    return rows[r][k]


def _prod(values, start=Fraction(1)):
    out = start
    for v in values:
        out = out * v
    return out


def step_coefficients(n: int, a: Sequence, b: Sequence) -> tuple[list, list]:
    """``(c_k, s_k)`` for ``k = 0..n``: the recurrence weights of column ``k``.

    ``c_k = prod_{j=n-k+1}^{n-1} a_j`` multiplies ``A(r-1, k-1)`` and
    ``s_k = sum_{j=n-k}^{n-1} b_j prod_{l=j+1}^{n-1} a_l`` multiplies ``A(r-1, k)``.
    """
    c = [_prod(a[j] for j in range(n - k + 1, n)) for k in range(n + 1)]
    s = [sum((b[j] * _prod(a[l] for l in range(j + 1, n)) for j in range(n - k, n)), Fraction(0)) for k in range(n + 1)]
    return c, s


def a_rows(n: int, a: Sequence, b: Sequence) -> Iterator[list]:
    """Stream the rows ``A_n(r, .)`` for ``r = 0, 1, 2, ...``."""
    c, s = step_coefficients(n, a, b)
    row = [Fraction(1)] + [Fraction(0)] * n
    while True:
        yield row
        row = [(row[k - 1] * c[k] if k else 0) + row[k] * s[k] for k in range(n + 1)]


@dataclass(frozen=True)
class ATable:
    n: int
    a: tuple
    b: tuple
    values: tuple

    def __call__(self, r: int, k: int):
        return self.values[r][k]

    def column(self, k: int) -> list:
        return [row[k] for row in self.values]


def a_table(n: int, a: Sequence, b: Sequence, R: int) -> ATable:
    rows = []
    for r, row in enumerate(a_rows(n, a, b)):
        if r > R:
            break
        rows.append(tuple(row))
    return ATable(n, tuple(a), tuple(b), tuple(rows))


def family_coefficients(family: LatticeFamily, spec: MeasureSpec, n: int) -> tuple[list, list]:
    pairs = [commutation_coefficients(family, spec, j) for j in range(n)]
    return [p[0] for p in pairs], [p[1] for p in pairs]


def _poly_mul(p: list, q: list) -> list:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] += x * y
    return out


def series_divide(num: list, den: list, order: int) -> list:
    """First ``order + 1`` coefficients of ``num / den`` as a power series (``den[0] != 0``)."""
    out = []
    for r in range(order + 1):
        acc = num[r] if r < len(num) else Fraction(0)
        for j in range(1, min(r, len(den) - 1) + 1):
            acc -= den[j] * out[r - j]
        out.append(acc / den[0])
    return out


def series_coefficients(n: int, k: int, R: int, a: Sequence, b: Sequence) -> list:
    """``A_n(0..R, k)`` read off ``F_k(x) = x^k prod c_i / prod (1 - s_i x)``."""
    c, s = step_coefficients(n, a, b)
    num = [Fraction(0)] * k + [_prod(c[1:k + 1])]
    den = [Fraction(1)]
    for i in range(1, k + 1):
        den = _poly_mul(den, [Fraction(1), -s[i]])
    return series_divide(num, den, R)


def dku_expansion_check(family: LatticeFamily, spec: MeasureSpec, n: int, k: int):
    """Residual of ``D^k U_n = (prod a) UD^k_n + (sum b prod a) D^{k-1}_n``."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    coeffs = [commutation_coefficients(family, spec, j) for j in range(n + 1)]
    a = [x[0] for x in coeffs]
    b = [x[1] for x in coeffs]
    lead = _prod(a[j] for j in range(n - k + 1, n + 1))
    tail = sum((b[j] * _prod(a[l] for l in range(j + 1, n + 1)) for j in range(n - k + 1, n + 1)), Fraction(0))
    lhs = word(family, spec, n, "D" * k + "U")
    rhs = la.scale(word(family, spec, n, "U" + "D" * k), lead) + la.scale(word(family, spec, n, "D" * (k - 1)), tail)
    return la.max_abs(lhs - rhs)


def reconstruction_residual(family: LatticeFamily, spec: MeasureSpec, n: int, r: int):
    """Residual of ``(UD)_n^r = sum_k A_n(r, k) (U^k D^k)_n``."""
    a, b = family_coefficients(family, spec, n)
    table = a_table(n, a, b, r)
    lhs = la.matrix_power(word(family, spec, n, "UD"), r)
    rhs = la.zeros(*la.shape(lhs), la.EXACT)
    for k in range(n + 1):
        coef = table(r, k)
        if coef:
            rhs = rhs + la.scale(word(family, spec, n, "U" * k + "D" * k), coef)
    return la.max_abs(lhs - rhs)


def occupancy_distribution(n: int, r: int) -> list[Fraction]:
    """Law of the number of occupied boxes after ``r`` balls fall uniformly into ``n`` boxes."""
    dist = [Fraction(1)] + [Fraction(0)] * n
    for _ in range(r):
        dist = [
            dist[k] * Fraction(k, n) + (dist[k - 1] * Fraction(n - k + 1, n) if k else 0)
            for k in range(n + 1)
        ]
    return dist


def occupancy_probability(n: int, r: int, k: int) -> Fraction:
    """``S(r, k) k! C(n, k) / n^r``."""
    return Fraction(stirling2(r, k) * factorial(k) * comb(n, k), n ** r)
