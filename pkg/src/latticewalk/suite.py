"""The invariant suite run by ``latticewalk verify``."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from . import lattices as lat
from .errors import LatticeWalkError
from .expansion import dku_expansion_check
from .lattices import LatticeFamily
from .measures import (
    MeasureSpec,
    PBinomial,
    Pitman,
    PlancherelLimit,
    ShiftedPlancherel,
    UniformLevel,
    ZMeasure,
    verify_coherence,
)
from .mixing import extremal_pairs_attain, geometric_tail_profile, separation_eigen, separation_profile
from .operators import composed_kernel, verify_commutation
from .spectral import closed_form_spectrum, verify_spectrum

SEPARATION_STEPS = 12


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}{': ' + self.detail if self.detail else ''}"


def suite_cases(max_n: int) -> list[tuple[LatticeFamily, MeasureSpec, list[int]]]:
    """Families, measures and levels covered at a given size bound."""
    levels = list(range(1, max_n + 1))
    half = lambda ambient: list(range(1, ambient // 2 + 1))  # noqa: E731
    boolean_n = max(2, min(max_n, 8))
    subspace_n = max(2, min(max_n, 4))
    return [
        (lat.young(), ZMeasure(1, 1), levels),
        (lat.young(), ZMeasure(0, Fraction(3, 2)), levels),
        (lat.young(), PlancherelLimit(), levels),
        (lat.kingman(), Pitman(1, Fraction(1, 4)), levels),
        (lat.kingman(), Pitman(2), levels),
        (lat.schur(), ShiftedPlancherel(), levels),
        (lat.pascal(), PBinomial(Fraction(1, 3)), levels),
        (lat.boolean(boolean_n), UniformLevel(), half(boolean_n)),
        (lat.subspace(subspace_n, 2), UniformLevel(), half(subspace_n)),
    ]


def _guard(name: str, fn: Callable[[], tuple[bool, str]]) -> CheckResult:
    try:
        ok, detail = fn()
    except LatticeWalkError as exc:
        return CheckResult(name, False, f"{type(exc).__name__}: {exc}")
    return CheckResult(name, ok, detail)


def _separation_agreement(family, spec, n) -> tuple[bool, str]:
    kernel = composed_kernel(family, spec, n)
    distinct = closed_form_spectrum(family, spec, n).distinct_nonunit()
    brute = list(separation_profile(kernel, SEPARATION_STEPS).s_star)
    tails = geometric_tail_profile(distinct, SEPARATION_STEPS)
    formula = [separation_eigen(distinct, r) for r in range(SEPARATION_STEPS + 1)]
    pairs = extremal_pairs_attain(kernel, SEPARATION_STEPS)
    return brute == tails == formula and pairs, "" if pairs else "extremal pair does not attain s*"


def run_suite(max_n: int) -> Iterator[CheckResult]:
    for family, spec, levels in suite_cases(max_n):
        tag = f"{family} {type(spec).__name__}"
        for n in levels:
            yield _guard(f"commutation {tag} n={n}",
                         lambda: (verify_commutation(family, spec, n).residual == 0, ""))
            yield _guard(f"coherence {tag} n={n}",
                         lambda: (verify_coherence(spec, family, n) == 0, ""))

            def chain_checks():
                kernel = composed_kernel(family, spec, n)
                verify_spectrum(kernel, closed_form_spectrum(family, spec, n))
                return kernel.is_row_stochastic() and kernel.reversibility_defect() == 0, ""

            yield _guard(f"kernel and spectrum {tag} n={n}", chain_checks)
            yield _guard(f"D^kU expansion {tag} n={n}",
                         lambda: (all(dku_expansion_check(family, spec, n, k) == 0 for k in range(1, n + 1)), ""))
            if family.kind != "schur" and n >= 2:
                yield _guard(f"separation agreement {tag} n={n}", lambda: _separation_agreement(family, spec, n))
