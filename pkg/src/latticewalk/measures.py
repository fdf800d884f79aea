"""Coherent families of probability measures on the branching diagrams."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, floor, isqrt
from typing import Union

from . import lattices as lat
from .errors import ConfigurationError, ValidationError
from .linalg import EXACT, check_backend, scalar
from .partitions import Partition

COMPLEMENTARY_BOUND = 10 ** 6


def _rational(x) -> Fraction:
    if isinstance(x, float):
        raise ValidationError("measure parameters must be rational; pass a string like '1/4'")
    return Fraction(x)


def _rational_sqrt(x: Fraction) -> Fraction | None:
    num, den = isqrt(x.numerator), isqrt(x.denominator)
    return Fraction(num, den) if num * num == x.numerator and den * den == x.denominator else None


def _is_degenerate(s1: Fraction, disc: Fraction) -> bool:
    """One root is a positive integer ``k`` and the other exceeds ``k - 1``.

    The measure then lives on diagrams with at most ``k`` rows, so levels
    above ``k`` carry zero atoms and ``measure_at_level`` rejects them.
    """
    root = _rational_sqrt(disc)
    if root is None:
        return False
    small, large = (s1 - root) / 2, (s1 + root) / 2
    return any(k.denominator == 1 and k > 0 and other > k - 1 for k, other in ((small, large), (large, small)))


@dataclass(frozen=True)
class ZMeasure:
    """z-measure with ``s1 = z + z'`` and ``s2 = z z'``."""

    s1: Fraction
    s2: Fraction

    def __post_init__(self):
        s1, s2 = _rational(self.s1), _rational(self.s2)
        object.__setattr__(self, "s1", s1)
        object.__setattr__(self, "s2", s2)
        if s2.denominator == 1 and s2 <= 0:
            raise ValidationError(f"zz' = {s2} is a non-positive integer")
        disc = s1 * s1 - 4 * s2
        if disc < 0:
            return  # principal series
        if _is_degenerate(s1, disc):
            return
        # complementary series: both real roots of t^2 - s1 t + s2 in one (m, m+1)
        half = s1 / 2
        m = floor(half)
        if abs(m) > COMPLEMENTARY_BOUND:
            raise ValidationError(f"complementary series check limited to |m| <= {COMPLEMENTARY_BOUND}")

        def f(t):
            return t * t - s1 * t + s2

        if not (m < half < m + 1 and f(m) > 0 and f(m + 1) > 0):
            raise ValidationError(f"(s1, s2) = ({s1}, {s2}) is in neither the principal nor the complementary series")

    def content_factor(self, c, backend: str = EXACT):
        """``(z + c)(z' + c)`` written in the symmetric coordinates."""
        return scalar(self.s2, backend) + scalar(self.s1, backend) * c + c * c


@dataclass(frozen=True)
class PlancherelLimit:
    pass


@dataclass(frozen=True)
class Pitman:
    theta: Fraction
    alpha: Fraction = Fraction(0)

    def __post_init__(self):
        theta, alpha = _rational(self.theta), _rational(self.alpha)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "alpha", alpha)
        if theta <= 0:
            raise ValidationError(f"theta must be positive, got {theta}")
        if not 0 <= alpha < 1:
            raise ValidationError(f"alpha must lie in [0, 1), got {alpha}")


@dataclass(frozen=True)
class ShiftedPlancherel:
    pass


@dataclass(frozen=True)
class PBinomial:
    p: Fraction

    def __post_init__(self):
        p = _rational(self.p)
        object.__setattr__(self, "p", p)
        if not 0 < p < 1:
            raise ValidationError(f"p must lie in (0, 1), got {p}")


@dataclass(frozen=True)
class UniformLevel:
    pass


MeasureSpec = Union[ZMeasure, PlancherelLimit, Pitman, ShiftedPlancherel, PBinomial, UniformLevel]

_COMPATIBLE = {
    ZMeasure: ("young",),
    PlancherelLimit: ("young",),
    Pitman: ("kingman",),
    ShiftedPlancherel: ("schur",),
    PBinomial: ("pascal",),
    UniformLevel: ("boolean", "subspace"),
}


def check_compatible(spec: MeasureSpec, family: lat.LatticeFamily) -> None:
    allowed = _COMPATIBLE.get(type(spec))
    if allowed is None or family.kind not in allowed:
        raise ConfigurationError(f"measure {type(spec).__name__} is not defined on the {family} lattice")


def default_spec(family: lat.LatticeFamily) -> MeasureSpec | None:
    """The parameter-free measure of a family, if it has one."""
    return {
        "young": PlancherelLimit(),
        "schur": ShiftedPlancherel(),
        "boolean": UniformLevel(),
        "subspace": UniformLevel(),
    }.get(family.kind)


def _fmt(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def spec_to_json(spec: MeasureSpec) -> dict:
    if isinstance(spec, ZMeasure):
        return {"measure": "z", "s1": _fmt(spec.s1), "s2": _fmt(spec.s2)}
    if isinstance(spec, Pitman):
        return {"measure": "pitman", "theta": _fmt(spec.theta), "alpha": _fmt(spec.alpha)}
    if isinstance(spec, PBinomial):
        return {"measure": "pbinomial", "p": _fmt(spec.p)}
    return {
        PlancherelLimit: {"measure": "plancherel"},
        ShiftedPlancherel: {"measure": "shifted_plancherel"},
        UniformLevel: {"measure": "uniform"},
    }[type(spec)]


def spec_from_json(data: dict) -> MeasureSpec:
    kind = data.get("measure")
    if kind == "z":
        return ZMeasure(Fraction(data["s1"]), Fraction(data["s2"]))
    if kind == "pitman":
        return Pitman(Fraction(data["theta"]), Fraction(data.get("alpha", "0")))
    if kind == "pbinomial":
        return PBinomial(Fraction(data["p"]))
    simple = {"plancherel": PlancherelLimit, "shifted_plancherel": ShiftedPlancherel, "uniform": UniformLevel}
    if kind in simple:
        return simple[kind]()
    raise ValidationError(f"unknown measure {kind!r}")


def _rising(x, n: int, one):
    out = one
    for i in range(n):
        out = out * (x + i)
    return out


def _z_weight(spec: ZMeasure, lam: Partition, backend: str):
    one = scalar(1, backend)
    num = one
    for c in lam.contents():
        num = num * spec.content_factor(c, backend)
    d = lat.closed_dimension(lat.young(), lam)
    return num / _rising(scalar(spec.s2, backend), lam.n, one) * d * d / factorial(lam.n)


def _pitman_weight(spec: Pitman, lam: Partition, backend: str):
    theta, alpha = scalar(spec.theta, backend), scalar(spec.alpha, backend)
    one = scalar(1, backend)
    num = one
    for i in range(len(lam)):
        num = num * (theta + i * alpha)
    arrangements = factorial(lam.n)
    for m in lam.multiplicities().values():
        arrangements //= factorial(m)
    for p in lam.parts:
        arrangements //= factorial(p)
    boxes = one
    for _, j in lam.cells():
        if j >= 2:
            boxes = boxes * (j - 1 - alpha)
    return num / _rising(theta, lam.n, one) * arrangements * boxes


def measure_at_level(spec: MeasureSpec, family: lat.LatticeFamily, n: int, backend: str = EXACT) -> dict:
    """The level-``n`` member of the coherent family, keyed by state in canonical order."""
    check_backend(backend)
    check_compatible(spec, family)
    states = lat.level_states(family, n)
    one = scalar(1, backend)
    if isinstance(spec, ZMeasure):
        weights = [_z_weight(spec, s, backend) for s in states]
    elif isinstance(spec, PlancherelLimit):
        weights = [scalar(lat.closed_dimension(family, s) ** 2, backend) / factorial(n) for s in states]
    elif isinstance(spec, Pitman):
        weights = [_pitman_weight(spec, s, backend) for s in states]
    elif isinstance(spec, ShiftedPlancherel):
        weights = [
            scalar(2 ** (n - len(s)) * lat.closed_dimension(family, s) ** 2, backend) / factorial(n)
            for s in states
        ]
    elif isinstance(spec, PBinomial):
        p = scalar(spec.p, backend)
        weights = [comb(n, s.x) * p ** s.x * (one - p) ** (n - s.x) for s in states]
    else:
        weights = [one / len(states)] * len(states)
    for s, w in zip(states, weights):
        if not w > 0:
            raise ValidationError(f"measure {spec} gives non-positive mass {w} to {s}")
    return dict(zip(states, weights))


def coherence_residual(family: lat.LatticeFamily, n: int, lower: dict, upper: dict):
    """Max defect of ``M_n(x) = sum_X d_x kappa(x, X) M_{n+1}(X) / d_X``."""
    lower_states = lat.level_states(family, n)
    upper_states = lat.level_states(family, n + 1)
    d_lo = lat.level_dimensions(family, n)
    d_hi = lat.level_dimensions(family, n + 1)
    lo = [lower[s] for s in lower_states]
    hi = [upper[s] for s in upper_states]
    pushed = [lo_i * 0 for lo_i in lo]
    for cov in lat.cover_relations(family, n):
        i, j = cov.lower_index, cov.upper_index
        pushed[i] = pushed[i] + hi[j] * (d_lo[i] * cov.multiplicity) / d_hi[j]
    return max(abs(a - b) for a, b in zip(lo, pushed))


def verify_coherence(spec: MeasureSpec, family: lat.LatticeFamily, n: int, backend: str = EXACT):
    lower = measure_at_level(spec, family, n, backend)
    upper = measure_at_level(spec, family, n + 1, backend)
    return coherence_residual(family, n, lower, upper)
