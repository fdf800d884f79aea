"""Total variation and separation distance, mixing times and limit curves."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

import numpy as np

from . import lattices as lat
from . import linalg as la
from .errors import FormulaInapplicableError, LatticeWalkError, NotApplicableError, ValidationError
from .expansion import stirling2
from .lattices import LatticeFamily
from .linalg import FLOAT
from .measures import MeasureSpec, Pitman, PlancherelLimit, ZMeasure
from .operators import DOWN_UP, UP_DOWN, ChainKernel, composed_kernel
from .partitions import Partition, odd_partitions
from .spectral import SpectralProfile

SCAN_CAP_FACTOR = 50
SERIES_CUTOFF = 1e-15
FLOAT_TOL = 1e-12

KINGMAN_THETA1 = "kingman_theta1"
COUPON_PLANCHEREL = "coupon_plancherel"
COUPON_PASCAL = "coupon_pascal"
LIMIT_KINDS = (KINGMAN_THETA1, COUPON_PLANCHEREL, COUPON_PASCAL)


# total variation ----------------------------------------------------------

def tv_distance(p: Sequence, q: Sequence):
    """``(1/2) sum |p(x) - q(x)|`` over a shared state ordering."""
    if len(p) != len(q):
        raise ValidationError("distributions have different supports")
    return sum((abs(a - b) for a, b in zip(p, q)), 0 * p[0] if p else 0) / 2


def _start_index(kernel: ChainKernel, x) -> int:
    if isinstance(x, int) and not isinstance(x, Partition):
        return x
    return kernel.states.index(x)


def tv_profile(kernel: ChainKernel, x, R: int) -> list:
    """``||K_x^r - pi||`` for ``r = 0..R``."""
    i = _start_index(kernel, x)
    one = la.scalar(1, kernel.backend)
    row = [one * (j == i) for j in range(kernel.size)]
    out = []
    for r in range(R + 1):
        out.append(tv_distance(row, kernel.pi))
        if r < R:
            row = la.vector_times(row, kernel.matrix)
    return out


def tv_max(kernel: ChainKernel, power) -> object:
    """``max_x ||K^r_x - pi||`` given the matrix ``K^r``."""
    size = kernel.size
    if kernel.backend == FLOAT:
        return float(np.max(np.abs(power - np.array(kernel.pi)[None, :]).sum(axis=1)) / 2)
    stationary = la.from_rows([list(kernel.pi)] * size, la.EXACT)
    flat = (power - stationary).entries()
    return max(la.to_fraction(sum(abs(v) for v in flat[i * size:(i + 1) * size])) for i in range(size)) / 2


@dataclass(frozen=True)
class EigenData:
    """Eigenvalues with ``pi``-orthonormal eigenfunctions (columns); index 0 is the constant one."""

    values: np.ndarray
    functions: np.ndarray


def kernel_eigendata(kernel: ChainKernel) -> EigenData:
    from .spectral import float_eigendata

    values, functions = float_eigendata(kernel)
    return EigenData(values, functions)


def schur_eigendata(n: int) -> EigenData:
    """Eigendata of the Schur down-up chain from the Hall-Littlewood eigenbasis."""
    from .spectral import schur_eigenbasis

    basis = sorted(schur_eigenbasis(n), key=lambda f: f.eigenvalue, reverse=True)
    return EigenData(np.array([float(f.eigenvalue) for f in basis]), np.column_stack([f.values for f in basis]))


def tv_spectral_bound(eigendata: EigenData | None, x: int, r: int) -> float:
    """``(1/2) sqrt(sum_{i >= 1} lambda_i^{2r} f_i(x)^2)``, an upper bound on ``||K_x^r - pi||``."""
    if eigendata is None:
        raise NotApplicableError("no orthonormal eigenbasis available")
    values = eigendata.values[1:]
    f = eigendata.functions[x, 1:]
    return 0.5 * math.sqrt(float(np.sum(values ** (2 * r) * f ** 2)))


def schur_top_weights(n: int) -> list[tuple[Fraction, Fraction]]:
    """``(m_1(mu)/n, n! / (z_mu 2^{n - l(mu)}))`` over odd ``mu``: squared eigenfunctions at ``(n)``."""
    return [
        (Fraction(mu.multiplicity(1), n), Fraction(factorial(n), mu.z() * 2 ** (n - len(mu))))
        for mu in odd_partitions(n)
    ]


def schur_top_tv_bound(n: int, r: int) -> float:
    """Spectral bound on the TV distance of the Schur chain started at ``(n)``."""
    total = sum(
        (float(w) * float(value) ** (2 * r) for value, w in schur_top_weights(n) if value != 1),
        0.0,
    )
    return 0.5 * math.sqrt(total)


def schur_theorem_steps(n: int, c: float) -> int:
    """``ceil(n log(n) / 2 + c n)``; rounding up only strengthens the guarantee."""
    return math.ceil(0.5 * n * math.log(n) + c * n)


def schur_theorem_bound(c: float) -> float:
    return math.exp(-3 * c) / 4


# separation distance ------------------------------------------------------

@dataclass(frozen=True)
class SeparationResult:
    value: object
    argpair: tuple


def _ratio_matrix(kernel: ChainKernel, power):
    """``K^r(x, y) / pi(y)``, kept in the backend's native scalars."""
    if kernel.backend == FLOAT:
        return power / np.array(kernel.pi)[None, :]
    return power * la.diag([1 / p for p in kernel.pi], la.EXACT)


def _separation_of_power(kernel: ChainKernel, power, start: int | None = None) -> SeparationResult:
    ratio = _ratio_matrix(kernel, power)
    size = kernel.size
    if kernel.backend == FLOAT:
        block = ratio if start is None else ratio[start:start + 1]
        flat = block.ravel()
        k = int(np.argmin(flat))
        value = float(1 - flat[k])
    else:
        flat = ratio.entries()
        if start is not None:
            flat = flat[start * size:(start + 1) * size]
        smallest = min(flat)
        k = flat.index(smallest)
        value = 1 - la.to_fraction(smallest)
    i, j = (start, k) if start is not None else divmod(k, size)
    return SeparationResult(value, (kernel.states[i], kernel.states[j]))


def separation_bruteforce(kernel: ChainKernel, r: int, start=None) -> SeparationResult:
    """``s*(r)`` (or ``s(r)`` from ``start``) from the exact matrix power, with the first maximizing pair."""
    power = la.matrix_power(kernel.matrix, r)
    return _separation_of_power(kernel, power, None if start is None else _start_index(kernel, start))


def pair_separation(kernel: ChainKernel, power, x, y):
    """``1 - K^r(x, y) / pi(y)``."""
    i, j = _start_index(kernel, x), _start_index(kernel, y)
    return 1 - la.entry(power, i, j) / kernel.pi[j]


@dataclass(frozen=True)
class SeparationProfile:
    r_values: tuple
    s_star: tuple
    argpairs: tuple
    tv_max: tuple

    def is_monotone(self) -> bool:
        return all(a >= b for a, b in zip(self.s_star, self.s_star[1:]))

    def is_submultiplicative(self) -> bool:
        s = dict(zip(self.r_values, self.s_star))
        return all(
            s[r1 + r2] <= s[r1] * s[r2]
            for r1 in self.r_values for r2 in self.r_values if r1 + r2 in s
        )

    def dominates_tv(self) -> bool:
        return all(t <= s for s, t in zip(self.s_star, self.tv_max))


def separation_profile(kernel: ChainKernel, R: int) -> SeparationProfile:
    """``s*(r)``, its maximizing pair and ``max_x TV`` for ``r = 0..R``."""
    power = la.identity(kernel.size, kernel.backend)
    s_star, pairs, tvs = [], [], []
    for r in range(R + 1):
        res = _separation_of_power(kernel, power)
        s_star.append(res.value)
        pairs.append(res.argpair)
        tvs.append(tv_max(kernel, power))
        if r < R:
            power = la.matmul(power, kernel.matrix)
    return SeparationProfile(tuple(range(R + 1)), tuple(s_star), tuple(pairs), tuple(tvs))


def separation_eigen(distinct_eigenvalues: Sequence, r: int):
    """``sum_i lambda_i^r prod_{j != i} (1 - lambda_j) / (lambda_i - lambda_j)`` over non-unit eigenvalues."""
    lams = list(distinct_eigenvalues)
    if len(set(lams)) != len(lams):
        raise FormulaInapplicableError("eigenvalues must be distinct")
    if any(v == 1 for v in lams):
        raise FormulaInapplicableError("exclude the eigenvalue 1")
    total = 0 * (lams[0] if lams else Fraction(0))
    for i, li in enumerate(lams):
        term = li ** r
        for j, lj in enumerate(lams):
            if j != i:
                term = term * (1 - lj) / (li - lj)
        total = total + term
    return total


def geometric_tail_profile(distinct_eigenvalues: Sequence, R: int) -> list:
    """``P(T > r)`` for ``r = 0..R`` where ``T`` sums geometrics with success ``1 - lambda_i``."""
    lams = list(distinct_eigenvalues)
    for v in lams:
        if not 0 <= v < 1:
            raise ValidationError(f"geometric parameter needs 0 <= lambda < 1, got {v}")
    one = Fraction(1) if not any(isinstance(v, float) for v in lams) else 1.0
    zero = one * 0
    # dist[t] = P(partial sum == t) for t <= R
    dist = [one] + [zero] * R
    for lam in lams:
        new = [zero] * (R + 1)
        for t in range(1, R + 1):
            new[t] = (1 - lam) * dist[t - 1] + lam * new[t - 1]
        dist = new
    tails, acc = [], zero
    for t in range(R + 1):
        acc = acc + dist[t]
        tails.append(one - acc)
    return tails


def geometric_tail(distinct_eigenvalues: Sequence, r: int):
    """``P(T > r)`` by exact convolution."""
    return geometric_tail_profile(distinct_eigenvalues, r)[r]


# mixing times -------------------------------------------------------------

@dataclass(frozen=True)
class MixingReport:
    expected_time: Fraction
    n_half: int
    lower_ok: bool
    upper_ok: bool

    @property
    def sandwich_ok(self) -> bool:
        return self.lower_ok and self.upper_ok


def expected_time(profile: SpectralProfile):
    """``E[T] = sum 1 / (1 - lambda)`` over distinct non-unit eigenvalues."""
    return sum((1 / (1 - v) for v in profile.distinct_nonunit()), Fraction(0))


def mixing_report(profile: SpectralProfile, kernel: ChainKernel | None = None) -> MixingReport:
    """``E[T]``, ``n*_{1/2}`` and the check ``E[T]/2 <= n*_{1/2} <= 2 E[T]``.

    ``n*_{1/2}`` scans brute-force ``s*(r)`` when a kernel is given and the
    geometric tail otherwise.
    """
    mean = expected_time(profile)
    cap = math.ceil(SCAN_CAP_FACTOR * mean) if mean else 1
    half = Fraction(1, 2)
    if kernel is not None:
        power = la.identity(kernel.size, kernel.backend)
        n_half = None
        for r in range(cap + 1):
            if _separation_of_power(kernel, power).value <= half:
                n_half = r
                break
            power = la.matmul(power, kernel.matrix)
    else:
        tails = geometric_tail_profile(profile.distinct_nonunit(), cap)
        n_half = next((r for r, t in enumerate(tails) if t <= half), None)
    if n_half is None:
        raise LatticeWalkError(f"separation stayed above 1/2 for {cap} steps")
    return MixingReport(mean, n_half, mean / 2 <= n_half, n_half <= 2 * mean)


def inverse_square_sum(n: int) -> Fraction:
    """``sum_{i=2}^n n^2 / i^2``."""
    return sum((Fraction(n * n, i * i) for i in range(2, n + 1)), Fraction(0))


def young_expected_time_bounds(s2, n: int) -> tuple[float, float]:
    """Integral bounds on ``E[T]`` for the z-measure chain with ``zz' = s2 != 1``."""
    s2 = float(s2)
    if s2 == 1:
        raise FormulaInapplicableError("use inverse_square_sum when zz' = 1")
    scale = n * (s2 + n - 1) / (1 - s2)
    lower = 1 + scale * math.log(2 * (n + s2 - 1) / (n * (s2 + 1)))
    upper = scale * math.log((n + s2 - 1) / (n * s2))
    return lower, upper


def kingman_expected_time_bounds(theta, n: int) -> tuple[float, float]:
    """Integral bounds on ``E[T]`` for the Pitman chain with ``theta != 1``."""
    theta = float(theta)
    if theta == 1:
        raise FormulaInapplicableError("use inverse_square_sum when theta = 1")
    scale = n * (theta + n - 1) / (theta - 1)
    lower = scale * math.log((n + 1) * (theta + 1) / (2 * (n + theta)))
    upper = scale * math.log(n * theta / (n + theta - 1))
    return lower, upper


# closed forms -------------------------------------------------------------

def plancherel_separation(n: int, r: int) -> Fraction:
    return 1 - Fraction(factorial(n) * (stirling2(r, n - 1) + stirling2(r, n)), n ** r)


def kingman_theta1_separation(n: int, r: int) -> Fraction:
    total = Fraction(0)
    for i in range(2, n + 1):
        total += (-1) ** i * (i * i - 1) * Fraction(factorial(n) ** 2, factorial(n - i) * factorial(n + i)) \
            * (1 - Fraction(i * i, n * n)) ** r
    return 2 * total


def pascal_separation(n: int, r: int) -> Fraction:
    return 1 - Fraction(factorial(n) * stirling2(r, n), n ** r)


def closed_form_separation(family: LatticeFamily, spec: MeasureSpec, n: int, r: int) -> Fraction:
    if family.kind == "young" and isinstance(spec, PlancherelLimit):
        return plancherel_separation(n, r)
    if family.kind == "kingman" and isinstance(spec, Pitman) and spec.theta == 1:
        return kingman_theta1_separation(n, r)
    if family.kind == "pascal":
        return pascal_separation(n, r)
    raise NotApplicableError(f"no closed form for {family} with {spec}")


def expected_time_closed_form(family: LatticeFamily, spec: MeasureSpec, n: int) -> Fraction:
    if (family.kind == "young" and isinstance(spec, ZMeasure) and spec.s2 == 1) or (
        family.kind == "kingman" and isinstance(spec, Pitman) and spec.theta == 1
    ):
        return inverse_square_sum(n)
    raise NotApplicableError(f"no closed form for E[T] on {family} with {spec}")


# shift identity and extremal pairs ----------------------------------------

@dataclass(frozen=True)
class ShiftCheck:
    holds: bool
    updown: tuple
    downup_shifted: tuple


def updown_shift_check(family: LatticeFamily, spec: MeasureSpec, n: int, R: int) -> ShiftCheck:
    """Compare ``s*`` of up-down at ``n`` after ``r`` steps with down-up at ``n + 1`` after ``r + 1``."""
    if family.kind not in ("young", "kingman"):
        raise NotApplicableError("the shift identity is established for the Young and Kingman lattices")
    up = separation_profile(composed_kernel(family, spec, n, UP_DOWN), R).s_star
    down = separation_profile(composed_kernel(family, spec, n + 1, DOWN_UP), R + 1).s_star[1:]
    return ShiftCheck(tuple(up) == tuple(down), tuple(up), tuple(down))


def extremal_pairs(kernel: ChainKernel) -> list[tuple]:
    """Pairs of states predicted to attain ``s*(r)`` for every ``r``."""
    family, n, states = kernel.family, kernel.level, kernel.states
    kind = family.kind
    if kernel.order != DOWN_UP:
        raise NotApplicableError("extremal pairs are characterized for down-up chains")
    if kind in ("young", "kingman"):
        top, bottom = Partition((n,)), Partition((1,) * n)
        return [(top, bottom), (bottom, top)]
    if kind == "pascal":
        return [(states[0], states[-1]), (states[-1], states[0])]
    if kind == "boolean":
        return [(x, y) for x in states for y in states if not x.mask & y.mask]
    if kind == "subspace":
        q = family.q
        return [
            (x, y) for x in states for y in states
            if len(lat.rref_mod(x.rows + y.rows, q)) == x.dim + y.dim
        ]
    raise NotApplicableError(f"no extremal-pair characterization for {family}")


def extremal_pairs_attain(kernel: ChainKernel, R: int) -> bool:
    """Every predicted pair attains ``s*(r)`` for ``r = 0..R``."""
    tol = FLOAT_TOL if kernel.backend == FLOAT else 0
    index = {s: i for i, s in enumerate(kernel.states)}
    cells = [(index[x], index[y]) for x, y in extremal_pairs(kernel)]
    power = la.identity(kernel.size, kernel.backend)
    for r in range(R + 1):
        ratio = _ratio_matrix(kernel, power)
        if kernel.backend == FLOAT:
            flat, smallest = ratio.ravel(), float(np.min(ratio))
        else:
            flat = ratio.entries()
            smallest = min(flat)
        if any(abs(flat[i * kernel.size + j] - smallest) > tol for i, j in cells):
            return False
        power = la.matmul(power, kernel.matrix)
    return True


# limit curves -------------------------------------------------------------

def limit_curve(kind: str, c: float) -> float:
    if kind == KINGMAN_THETA1:
        if c <= 0:
            raise ValidationError("the Kingman limit curve needs c > 0")
        total, i = 0.0, 2
        while True:
            term = (i * i - 1) * math.exp(-c * i * i)
            total += term if i % 2 == 0 else -term
            if term < SERIES_CUTOFF:
                return 2 * total
            i += 1
    if kind == COUPON_PLANCHEREL:
        e = math.exp(-c)
        return 1 - math.exp(-e) * (1 + e)
    if kind == COUPON_PASCAL:
        return 1 - math.exp(-math.exp(-c))
    raise ValidationError(f"unknown limit curve {kind!r}; choose from {LIMIT_KINDS}")


def kingman_partial_sums(c: float, terms: int) -> list[float]:
    """Partial sums of the Kingman limit series through ``i = 2..terms+1``."""
    out, total = [], 0.0
    for i in range(2, terms + 2):
        total += (-1) ** i * 2 * (i * i - 1) * math.exp(-c * i * i)
        out.append(total)
    return out


def finite_curve(kind: str, n: int, c: float) -> float:
    """Finite-``n`` separation at the time scale matching ``limit_curve(kind, c)``."""
    if kind == KINGMAN_THETA1:
        return float(kingman_theta1_separation(n, math.ceil(c * n * n)))
    r = math.ceil(n * math.log(n) + c * n)
    if kind == COUPON_PLANCHEREL:
        return float(plancherel_separation(n, r))
    if kind == COUPON_PASCAL:
        return float(pascal_separation(n, r))
    raise ValidationError(f"unknown limit curve {kind!r}; choose from {LIMIT_KINDS}")
