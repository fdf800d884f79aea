"""Spectra of down-up and up-down chains derived from commutation data."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, sqrt
from typing import Sequence

import numpy as np

from . import lattices as lat
from . import linalg as la
from .errors import CapacityError, SpectrumMismatchError, ValidationError
from .lattices import LatticeFamily
from .linalg import EXACT, FLOAT
from .measures import MeasureSpec, ShiftedPlancherel
from .operators import (
    DOWN_UP,
    UP_DOWN,
    ChainKernel,
    algebraic_down,
    algebraic_up,
    commutation_coefficients,
    composed_kernel,
    kernel_scale,
)
from .partitions import Partition, enumerate_partitions, odd_partitions

SCHUR_EIGENBASIS_MAX_N = 8
FLOAT_TOL = 1e-9


@dataclass(frozen=True)
class SpectralProfile:
    """Eigenvalue multiset as ``(value, multiplicity)`` pairs, largest value first."""

    pairs: tuple

    def __post_init__(self):
        merged: dict = {}
        for value, mult in self.pairs:
            if mult < 0:
                raise ValidationError(f"negative multiplicity {mult} for eigenvalue {value}")
            if mult:
                merged[value] = merged.get(value, 0) + mult
        object.__setattr__(self, "pairs", tuple(sorted(merged.items(), key=lambda kv: kv[0], reverse=True)))

    @property
    def size(self) -> int:
        return sum(m for _, m in self.pairs)

    @property
    def values(self) -> list:
        return [v for v, _ in self.pairs]

    def multiplicity(self, value) -> int:
        return dict(self.pairs).get(value, 0)

    def distinct_nonunit(self) -> list:
        return [v for v, _ in self.pairs if v != 1]

    def expanded(self) -> list:
        return [v for v, m in self.pairs for _ in range(m)]

    def map(self, fn) -> "SpectralProfile":
        return SpectralProfile(tuple((fn(v), m) for v, m in self.pairs))

    def to_json(self) -> list:
        out = []
        for v, m in self.pairs:
            text = f"{v.numerator}/{v.denominator}" if isinstance(v, Fraction) else repr(float(v))
            out.append({"value": text, "multiplicity": m})
        return out


def commutation_eigenvalue(a: Sequence, b: Sequence, i: int, n: int):
    """``sum_{j=i}^{n-1} b_j prod_{k=j+1}^{n-1} a_k`` (zero when ``i = n``)."""
    value = b[0] * 0 if n else Fraction(0)
    for j in range(i, n):
        term = b[j]
        for k in range(j + 1, n):
            term = term * a[k]
        value = value + term
    return value


def spectrum_from_commutation(a: Sequence, b: Sequence, p: Sequence[int], n: int) -> SpectralProfile:
    """Eigenvalues of ``UD_n`` from ``a_0..a_{n-1}``, ``b_0..b_{n-1}`` and rank sizes ``p_0..p_n``.

    The ``i``-th eigenvalue has multiplicity ``p_i - p_{i-1}``; ``i = n`` gives 0.
    """
    if len(a) < n or len(b) < n or len(p) < n + 1:
        raise ValidationError(f"need a, b of length {n} and p of length {n + 1}")
    return SpectralProfile(tuple(
        (commutation_eigenvalue(a, b, i, n), p[i] - (p[i - 1] if i else 0)) for i in range(n + 1)
    ))


def _check_spectral_level(family: LatticeFamily, n: int, order: str) -> None:
    if order not in (DOWN_UP, UP_DOWN):
        raise ValidationError(f"unknown chain order {order!r}")
    if order == DOWN_UP and n < 1:
        raise ValidationError("down-up chain needs n >= 1")
    if family.is_finite and not 0 < 2 * n <= family.ambient:
        raise ValidationError(f"{family} spectra need 0 < 2j <= {family.ambient}, got j = {n}")


def algebraic_spectrum(family: LatticeFamily, spec: MeasureSpec, n: int, backend: str = EXACT) -> SpectralProfile:
    """Spectrum of the unnormalized ``UD_n``."""
    coeffs = [commutation_coefficients(family, spec, j, backend) for j in range(n)]
    p = [lat.level_size(family, j) for j in range(n + 1)]
    return spectrum_from_commutation([c[0] for c in coeffs], [c[1] for c in coeffs], p, n)


def closed_form_spectrum(family: LatticeFamily, spec: MeasureSpec, n: int, order: str = DOWN_UP,
                         backend: str = EXACT) -> SpectralProfile:
    """Predicted spectrum of the down-up or up-down chain on level ``n``.

    Up-down uses ``DU_n = a_n UD_n + b_n I`` so it needs no extra theory.
    """
    _check_spectral_level(family, n, order)
    base = algebraic_spectrum(family, spec, n, backend)
    if order == DOWN_UP:
        s = la.scalar(kernel_scale(family, n), backend)
        return base.map(lambda v: v * s)
    a, b = commutation_coefficients(family, spec, n, backend)
    s = la.scalar(kernel_scale(family, n + 1), backend)
    if n == 0:
        base = SpectralProfile(((la.scalar(0, backend), 1),))
    return base.map(lambda v: (a * v + b) * s)


@dataclass(frozen=True)
class SpectrumReport:
    backend: str
    checked: tuple = field(default_factory=tuple)
    annihilated: bool = True


def verify_spectrum(kernel: ChainKernel, profile: SpectralProfile) -> SpectrumReport:
    """Confirm ``profile`` is the spectrum of ``kernel``; raise ``SpectrumMismatchError`` otherwise."""
    if kernel.backend == FLOAT:
        return _verify_float(kernel, profile)
    size = kernel.size
    if profile.size != size:
        raise SpectrumMismatchError(None, f"multiplicities sum to {profile.size}, kernel has {size} states")
    eye = la.identity(size, EXACT)
    checked = []
    for value, mult in profile.pairs:
        if value == 1:
            if not kernel.is_row_stochastic():
                raise SpectrumMismatchError(value, "constant function is not fixed")
            continue
        shifted = kernel.matrix - la.scale(eye, value)
        found = size - la.rank(shifted)
        if found != mult:
            raise SpectrumMismatchError(value, f"eigenvalue {value}: predicted multiplicity {mult}, found {found}")
        checked.append((value, mult))
    product = eye
    for value in profile.values:
        product = la.matmul(product, kernel.matrix - la.scale(eye, value))
    if not la.is_zero(product):
        raise SpectrumMismatchError(profile.values[-1], "product of (K - lambda I) over the profile is nonzero")
    return SpectrumReport(EXACT, tuple(checked), True)


def _symmetrized(kernel: ChainKernel) -> tuple[np.ndarray, np.ndarray]:
    k = kernel.matrix if kernel.backend == FLOAT else np.array(la.to_lists(kernel.matrix), dtype=float)
    root = np.sqrt(np.array([float(p) for p in kernel.pi]))
    sym = root[:, None] * k / root[None, :]
    return (sym + sym.T) / 2, root


def float_eigendata(kernel: ChainKernel) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and ``pi``-orthonormal eigenfunctions as columns."""
    sym, root = _symmetrized(kernel)
    values, vectors = np.linalg.eigh(sym)
    order = np.argsort(values)[::-1]
    return values[order], vectors[:, order] / root[:, None]


def _verify_float(kernel: ChainKernel, profile: SpectralProfile) -> SpectrumReport:
    values, _ = float_eigendata(kernel)
    predicted = sorted((float(v) for v in profile.expanded()), reverse=True)
    if len(predicted) != len(values):
        raise SpectrumMismatchError(None, f"multiplicities sum to {len(predicted)}, kernel has {len(values)} states")
    for got, want in zip(values, predicted):
        if abs(got - want) > FLOAT_TOL:
            raise SpectrumMismatchError(want, f"numerical eigenvalue {got} differs from {want}")
    return SpectrumReport(FLOAT, tuple(profile.pairs), True)


@dataclass(frozen=True)
class EigenspaceReport:
    applicable: bool
    reason: str = ""
    injective: bool = False
    surjective: bool = False
    kernel_dimension_ok: bool = False
    images_ok: bool = False

    @property
    def ok(self) -> bool:
        return self.applicable and self.injective and self.surjective and self.kernel_dimension_ok and self.images_ok


def eigenspace_structure(family: LatticeFamily, spec: MeasureSpec, n: int) -> EigenspaceReport:
    """Check ``U_n`` injective, ``D_{n+1}`` onto, and ``U^{n-i} ker D_i`` inside the predicted eigenspaces."""
    coeffs = [commutation_coefficients(family, spec, j) for j in range(n + 1)]
    if coeffs[0][1] != 1:
        return EigenspaceReport(False, f"b_0 = {coeffs[0][1]} is not 1")
    for j, (a, b) in enumerate(coeffs):
        if (j >= 1 and a <= 0) or b <= 0:
            return EigenspaceReport(False, f"coefficients a_{j} = {a}, b_{j} = {b} leave the positive regime")
    p = [lat.level_size(family, j) for j in range(n + 2)]
    up_n = algebraic_up(family, spec, n).matrix
    down_next = algebraic_down(family, spec, n + 1).matrix
    injective = la.rank(up_n) == p[n]
    surjective = la.rank(down_next) == p[n]
    kernel_dimension_ok = len(la.left_nullspace(algebraic_down(family, spec, n).matrix)) == p[n] - (p[n - 1] if n else 0)
    ud = la.matmul(algebraic_down(family, spec, n).matrix, algebraic_up(family, spec, n - 1).matrix) if n else la.zeros(p[0], p[0], EXACT)
    images_ok = True
    for i in range(n + 1):
        value = commutation_eigenvalue([c[0] for c in coeffs], [c[1] for c in coeffs], i, n)
        basis = la.left_nullspace(algebraic_down(family, spec, i).matrix)
        if not basis:
            continue
        image = la.from_rows(basis, EXACT)
        for j in range(i, n):
            image = la.matmul(image, algebraic_up(family, spec, j).matrix)
        residual = la.matmul(image, ud - la.scale(la.identity(p[n], EXACT), value))
        if not la.is_zero(residual):
            images_ok = False
    return EigenspaceReport(True, "", injective, surjective, kernel_dimension_ok, images_ok)


@dataclass(frozen=True)
class SchurEigenfunction:
    mu: Partition
    eigenvalue: Fraction
    states: tuple
    values: np.ndarray


def schur_eigenbasis(n: int) -> list[SchurEigenfunction]:
    """Orthonormal eigenfunctions ``psi_mu`` of the Schur down-up chain, indexed by odd partitions."""
    from .symfunc import x_coefficients

    if n > SCHUR_EIGENBASIS_MAX_N:
        raise CapacityError(f"Schur eigenbasis is limited to n <= {SCHUR_EIGENBASIS_MAX_N}")
    if n < 1:
        raise ValidationError("Schur eigenbasis needs n >= 1")
    states = tuple(enumerate_partitions(n, distinct_only=True))
    g = lat.level_dimensions(lat.schur(), n)
    table = x_coefficients(n)
    out = []
    for mu in odd_partitions(n):
        norm = sqrt(factorial(n) / (mu.z() * 2 ** (n - len(mu))))
        values = np.array([norm * float(table[lam][mu]) / g[i] for i, lam in enumerate(states)])
        out.append(SchurEigenfunction(mu, Fraction(mu.multiplicity(1), n), states, values))
    return out


def schur_kernel(n: int, backend: str = FLOAT) -> ChainKernel:
    return composed_kernel(lat.schur(), ShiftedPlancherel(), n, DOWN_UP, backend)
