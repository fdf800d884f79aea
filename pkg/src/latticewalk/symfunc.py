"""Symmetric functions of small degree in the monomial basis.

Enough machinery to expand power sums in Hall-Littlewood ``P_lambda(x; -1)``
(Schur's Q-functions divided by ``2^{l(lambda)}``), which supplies the
eigenfunctions of the Schur down-up chain.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from . import linalg as la
from .errors import CapacityError, LatticeWalkError, ValidationError
from .partitions import Partition, enumerate_partitions, odd_partitions

MAX_DEGREE = 8


def _check_degree(n: int) -> None:
    if n > MAX_DEGREE:
        raise CapacityError(f"symmetric function degree limited to {MAX_DEGREE}, got {n}")


@dataclass(frozen=True)
class MonomialExpansion:
    """``sum_nu coeffs[nu] m_nu``, homogeneous of degree ``degree``."""

    degree: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for nu, c in self.coeffs.items():
            if nu.n != self.degree:
                raise ValidationError(f"m_{nu} has degree {nu.n}, expected {self.degree}")
            if c:
                clean[nu] = Fraction(c)
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def one(cls) -> "MonomialExpansion":
        return cls(0, {Partition(()): Fraction(1)})

    @classmethod
    def zero(cls, degree: int) -> "MonomialExpansion":
        return cls(degree, {})

    def __getitem__(self, nu: Partition) -> Fraction:
        return self.coeffs.get(nu, Fraction(0))

    def __eq__(self, other) -> bool:
        return isinstance(other, MonomialExpansion) and self.degree == other.degree and self.coeffs == other.coeffs

    def __add__(self, other: "MonomialExpansion") -> "MonomialExpansion":
        if self.degree != other.degree:
            raise ValidationError("cannot add symmetric functions of different degrees")
        out = dict(self.coeffs)
        for nu, c in other.coeffs.items():
            out[nu] = out.get(nu, Fraction(0)) + c
        return MonomialExpansion(self.degree, out)

    def scale(self, c) -> "MonomialExpansion":
        return MonomialExpansion(self.degree, {nu: v * c for nu, v in self.coeffs.items()})

    def __sub__(self, other: "MonomialExpansion") -> "MonomialExpansion":
        return self + other.scale(-1)

    def __mul__(self, other: "MonomialExpansion") -> "MonomialExpansion":
        degree = self.degree + other.degree
        _check_degree(degree)
        out = {}
        for alpha in enumerate_partitions(degree):
            total = Fraction(0)
            # coefficient of x^alpha: split each exponent between the two factors
            for left in product(*(range(e + 1) for e in alpha.parts)):
                if sum(left) != self.degree:
                    continue
                f = self[_sorted_partition(left)]
                if f:
                    g = other[_sorted_partition(tuple(e - x for e, x in zip(alpha.parts, left)))]
                    total += f * g
            if total:
                out[alpha] = total
        return MonomialExpansion(degree, out)


def _sorted_partition(exponents) -> Partition:
    return Partition(tuple(sorted((e for e in exponents if e), reverse=True)))


def monomial(nu: Partition) -> MonomialExpansion:
    return MonomialExpansion(nu.n, {nu: Fraction(1)})


def power_sum_monomial(mu: Partition) -> MonomialExpansion:
    """``p_mu = prod_i p_{mu_i}`` with ``p_k = m_(k)``."""
    _check_degree(mu.n)
    out = MonomialExpansion.one()
    for part in mu.parts:
        out = out * monomial(Partition((part,)))
    return out


@lru_cache(maxsize=None)
def q_function(k: int) -> MonomialExpansion:
    """``q_k``: coefficient of ``t^k`` in ``prod_i (1 + x_i t) / (1 - x_i t)``."""
    _check_degree(k)
    if k < 0:
        return MonomialExpansion.zero(0)
    return MonomialExpansion(k, {lam: Fraction(2 ** len(lam)) for lam in enumerate_partitions(k)})


@lru_cache(maxsize=None)
def _two_row_q(r: int, s: int) -> MonomialExpansion:
    """``Q_(r,s) = q_r q_s + 2 sum_{i=1}^s (-1)^i q_{r+i} q_{s-i}``; ``Q_(r,0) = q_r``."""
    out = q_function(r) * q_function(s)
    for i in range(1, s + 1):
        out = out + (q_function(r + i) * q_function(s - i)).scale(2 * (-1) ** i)
    return out


def _pfaffian(parts: tuple[int, ...]) -> MonomialExpansion:
    if not parts:
        return MonomialExpansion.one()
    first, rest = parts[0], parts[1:]
    total = None
    for j, other in enumerate(rest):
        term = _two_row_q(first, other) * _pfaffian(rest[:j] + rest[j + 1:])
        term = term if j % 2 == 0 else term.scale(-1)
        total = term if total is None else total + term
    return total


@lru_cache(maxsize=None)
def schur_q(lam: Partition) -> MonomialExpansion:
    """Schur's ``Q_lambda`` as the Pfaffian of the two-row functions."""
    if not lam.is_strict():
        raise ValidationError(f"Q-functions need a strict partition, got {lam}")
    _check_degree(lam.n)
    parts = lam.parts + ((0,) if len(lam) % 2 else ())
    return _pfaffian(parts)


def hl_p_at_minus_one(lam: Partition) -> MonomialExpansion:
    """Hall-Littlewood ``P_lambda(x; -1) = 2^{-l(lambda)} Q_lambda``."""
    return schur_q(lam).scale(Fraction(1, 2 ** len(lam)))


@lru_cache(maxsize=None)
def x_coefficients(n: int) -> dict:
    """``X[lam][mu]``: coefficient of ``P_lam(x; -1)`` in ``p_mu`` for strict ``lam`` and odd ``mu``."""
    _check_degree(n)
    strict = enumerate_partitions(n, distinct_only=True)
    odd = odd_partitions(n)
    rows = enumerate_partitions(n)
    basis = la.from_rows([[hl_p_at_minus_one(lam)[nu] for lam in strict] for nu in rows], la.EXACT)
    targets = la.from_rows([[power_sum_monomial(mu)[nu] for mu in odd] for nu in rows], la.EXACT)
    gram = la.transpose(basis) * basis
    try:
        solution = gram.solve(la.transpose(basis) * targets)
    except ZeroDivisionError as exc:
        raise LatticeWalkError(f"Hall-Littlewood basis is singular in degree {n}") from exc
    if not la.is_zero(basis * solution - targets):
        raise LatticeWalkError(f"power sums of degree {n} are not in the span of P_lambda(x; -1)")
    values = la.to_lists(solution)
    return {lam: {mu: values[i][j] for j, mu in enumerate(odd)} for i, lam in enumerate(strict)}


__all__ = [
    "MonomialExpansion",
    "hl_p_at_minus_one",
    "monomial",
    "power_sum_monomial",
    "q_function",
    "schur_q",
    "x_coefficients",
]
