"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 capacity exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import lattices as lat
from . import linalg as la
from . import mixing as mx
from .errors import (
    CapacityError,
    ConfigurationError,
    LatticeWalkError,
    NotApplicableError,
    SpectrumMismatchError,
    ValidationError,
)
from .measures import (
    MeasureSpec,
    PBinomial,
    Pitman,
    PlancherelLimit,
    ShiftedPlancherel,
    UniformLevel,
    ZMeasure,
    check_compatible,
    spec_to_json,
)
from .operators import DOWN_UP, UP_DOWN, composed_kernel
from .spectral import closed_form_spectrum, verify_spectrum
from .suite import run_suite

SCHEMA = "1"
EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3
MEASURES = ("z", "plancherel", "pitman", "shifted_plancherel", "pbinomial", "uniform")


class VerificationFailure(Exception):
    pass


def fmt(x) -> str:
    """Canonical cell text: ``num/den`` for rationals, ``repr`` for floats."""
    if isinstance(x, float):
        return repr(x)
    x = la.to_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"not a rational number: {text!r}") from exc


def parse_range(text: str) -> list[int]:
    """``"5"``, ``"0..10"`` (inclusive) or ``"1,3,7"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ValidationError(f"bad integer range {text!r}") from exc


def parse_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ValidationError(f"bad number list {text!r}") from exc


@dataclass(frozen=True)
class RunConfig:
    command: str
    family: lat.LatticeFamily | None
    spec: MeasureSpec | None
    n: int | None
    order: str
    backend: str
    output_format: str
    output: str | None


def build_family(args) -> lat.LatticeFamily:
    kind = args.family
    if kind in ("boolean", "subspace") and args.ambient is None:
        raise ValidationError(f"--ambient is required for the {kind} lattice")
    if kind == "boolean":
        return lat.boolean(args.ambient)
    if kind == "subspace":
        return lat.subspace(args.ambient, args.q)
    return lat.LatticeFamily(kind)


def build_spec(args, family: lat.LatticeFamily) -> MeasureSpec:
    measure = args.measure
    if measure is None:
        measure = {
            "young": "z" if args.s2 is not None else "plancherel",
            "kingman": "pitman",
            "schur": "shifted_plancherel",
            "pascal": "pbinomial",
        }.get(family.kind, "uniform")
    if measure == "z":
        if args.s2 is None:
            raise ValidationError("z-measure needs --s2 (and optionally --s1)")
        return ZMeasure(_rational(args.s1 or "0"), _rational(args.s2))
    if measure == "pitman":
        if args.theta is None:
            raise ValidationError("Pitman measure needs --theta")
        return Pitman(_rational(args.theta), _rational(args.alpha or "0"))
    if measure == "pbinomial":
        return PBinomial(_rational(args.p or "1/2"))
    return {"plancherel": PlancherelLimit, "shifted_plancherel": ShiftedPlancherel, "uniform": UniformLevel}[measure]()


def _config(args) -> RunConfig:
    family = spec = None
    if getattr(args, "family", None):
        family = build_family(args)
        spec = build_spec(args, family)
        check_compatible(spec, family)
    return RunConfig(
        args.command, family, spec, getattr(args, "n", None), getattr(args, "order", DOWN_UP),
        getattr(args, "backend", la.EXACT), getattr(args, "format", "json"), args.output,
    )


def _header(cfg: RunConfig) -> dict:
    out = {"schema": SCHEMA, "command": cfg.command}
    if cfg.family is not None:
        out["family"] = str(cfg.family)
        out["measure"] = spec_to_json(cfg.spec)
        out["backend"] = cfg.backend
    if cfg.n is not None:
        out["n"] = cfg.n
    return out


def _dump_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _dump_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _kernel(cfg: RunConfig):
    if cfg.n is None:
        raise ValidationError("--n is required")
    return composed_kernel(cfg.family, cfg.spec, cfg.n, cfg.order, cfg.backend)


# subcommands --------------------------------------------------------------

def cmd_spectrum(cfg: RunConfig, args) -> str:
    profile = closed_form_spectrum(cfg.family, cfg.spec, cfg.n, cfg.order, cfg.backend)
    payload = _header(cfg) | {"order": cfg.order, "spectrum": profile.to_json()}
    if args.verify:
        verify_spectrum(_kernel(cfg), profile)
        payload["verified"] = True
    if cfg.output_format == "csv":
        return _dump_csv(["value", "multiplicity"], [[e["value"], e["multiplicity"]] for e in payload["spectrum"]])
    return _dump_json(payload)


def kernel_csv(kernel) -> str:
    labels = [lat.state_label(s) for s in kernel.states]
    rows = [[labels[i]] + [fmt(v) for v in row] for i, row in enumerate(la.to_lists(kernel.matrix))]
    return _dump_csv(["state"] + labels, rows)


def cmd_kernel(cfg: RunConfig, args) -> str:
    kernel = _kernel(cfg)
    if cfg.output_format == "csv":
        return kernel_csv(kernel)
    payload = _header(cfg) | {
        "order": cfg.order,
        "states": [lat.state_label(s) for s in kernel.states],
        "matrix": [[fmt(v) for v in row] for row in la.to_lists(kernel.matrix)],
        "pi": [fmt(p) for p in kernel.pi],
    }
    return _dump_json(payload)


def cmd_separation(cfg: RunConfig, args) -> str:
    kernel = _kernel(cfg)
    r_values = parse_range(args.r)
    profile = mx.separation_profile(kernel, max(r_values))
    rows = [
        [r, fmt(profile.s_star[r]), fmt(profile.tv_max[r]),
         lat.state_label(profile.argpairs[r][0]), lat.state_label(profile.argpairs[r][1])]
        for r in r_values
    ]
    if not (profile.is_monotone() and profile.dominates_tv()):
        raise VerificationFailure("separation profile violates monotonicity or TV domination")
    header = ["r", "s_star", "tv_max", "arg_x", "arg_y"]
    if cfg.output_format == "csv":
        return _dump_csv(header, rows)
    return _dump_json(_header(cfg) | {"order": cfg.order, "profile": [dict(zip(header, row)) for row in rows]})


def _find_state(kernel, label: str):
    for s in kernel.states:
        if lat.state_label(s) == label:
            return s
    raise ValidationError(f"state {label!r} is not on level {kernel.level}")


def cmd_tv(cfg: RunConfig, args) -> str:
    kernel = _kernel(cfg)
    start = _find_state(kernel, args.start) if args.start else kernel.states[0]
    r_values = parse_range(args.r)
    tvs = mx.tv_profile(kernel, start, max(r_values))
    eig = mx.kernel_eigendata(kernel)
    x = kernel.states.index(start)
    rows = [[r, fmt(tvs[r]), fmt(mx.tv_spectral_bound(eig, x, r))] for r in r_values]
    header = ["r", "tv", "spectral_bound"]
    if cfg.output_format == "csv":
        return _dump_csv(header, rows)
    return _dump_json(_header(cfg) | {"start": lat.state_label(start), "profile": [dict(zip(header, row)) for row in rows]})


def cmd_mixing_time(cfg: RunConfig, args) -> str:
    profile = closed_form_spectrum(cfg.family, cfg.spec, cfg.n, DOWN_UP)
    kernel = _kernel(cfg) if args.brute_force else None
    report = mx.mixing_report(profile, kernel)
    payload = _header(cfg) | {
        "expected_time": fmt(report.expected_time),
        "n_half": report.n_half,
        "sandwich": {"lower": report.lower_ok, "upper": report.upper_ok},
    }
    try:
        payload["expected_time_closed_form"] = fmt(mx.expected_time_closed_form(cfg.family, cfg.spec, cfg.n))
    except NotApplicableError:
        pass
    if cfg.family.kind == "kingman" and cfg.spec.theta != 1:
        lo, hi = mx.kingman_expected_time_bounds(cfg.spec.theta, cfg.n)
        payload["expected_time_bounds"] = [fmt(lo), fmt(hi)]
    if isinstance(cfg.spec, ZMeasure) and cfg.spec.s2 != 1:
        lo, hi = mx.young_expected_time_bounds(cfg.spec.s2, cfg.n)
        payload["expected_time_bounds"] = [fmt(lo), fmt(hi)]
    if not report.sandwich_ok:
        sys.stdout.write(_dump_json(payload))
        raise VerificationFailure("mixing-time sandwich violated")
    return _dump_json(payload)


def emit_limit_table(kind: str, c_values: Sequence[float], n_values: Sequence[int] = (20, 40)) -> str:
    """CSV with one row per ``c``: finite-``n`` values then the limit."""
    header = ["c"] + [f"n={n}" for n in n_values] + ["limit"]
    rows = [
        [fmt(c)] + [fmt(mx.finite_curve(kind, n, c)) for n in n_values] + [fmt(mx.limit_curve(kind, c))]
        for c in c_values
    ]
    return _dump_csv(header, rows)


def cmd_limits(cfg: RunConfig, args) -> str:
    return emit_limit_table(args.kind, parse_floats(args.c), parse_range(args.n_values))


def cmd_verify(cfg: RunConfig, args) -> str:
    lines, failed = [], 0
    for result in run_suite(args.max_n):
        lines.append(result.line())
        failed += not result.ok
    lines.append(f"{len(lines) - failed} passed, {failed} failed")
    text = "\n".join(lines) + "\n"
    if failed:
        sys.stdout.write(text)
        raise VerificationFailure(f"{failed} checks failed")
    return text


def cmd_shift_check(cfg: RunConfig, args) -> str:
    check = mx.updown_shift_check(cfg.family, cfg.spec, cfg.n, args.R)
    payload = _header(cfg) | {
        "holds": check.holds,
        "updown": [fmt(v) for v in check.updown],
        "downup_shifted": [fmt(v) for v in check.downup_shifted],
    }
    if not check.holds:
        sys.stdout.write(_dump_json(payload))
        raise VerificationFailure("shift identity failed")
    return _dump_json(payload)


COMMANDS = {
    "spectrum": cmd_spectrum,
    "kernel": cmd_kernel,
    "separation": cmd_separation,
    "tv": cmd_tv,
    "mixing-time": cmd_mixing_time,
    "verify": cmd_verify,
    "limits": cmd_limits,
    "shift-check": cmd_shift_check,
}


def _family_options(p: argparse.ArgumentParser, orders: bool = True) -> None:
    p.add_argument("--family", required=True, choices=lat.FAMILY_KINDS)
    p.add_argument("--measure", choices=MEASURES)
    p.add_argument("--s1", help="z + z' (rational)")
    p.add_argument("--s2", help="z z' (rational)")
    p.add_argument("--theta")
    p.add_argument("--alpha")
    p.add_argument("--p")
    p.add_argument("--ambient", type=int, help="N for boolean and subspace lattices")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--n", type=int, required=True, help="level")
    if orders:
        p.add_argument("--order", choices=(DOWN_UP, UP_DOWN), default=DOWN_UP)
    p.add_argument("--backend", choices=la.BACKENDS, default=la.EXACT)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="latticewalk", description=__doc__.splitlines()[0])
    parser.add_argument("--output", "-o", help="write to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="predicted spectrum of a chain")
    _family_options(p)
    p.add_argument("--verify", action="store_true", help="check the prediction against the kernel")
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("kernel", help="dump a chain kernel")
    _family_options(p)
    p.add_argument("--format", choices=("json", "csv"), default="csv")

    p = sub.add_parser("separation", help="brute-force separation profile")
    _family_options(p)
    p.add_argument("--r", default="0..10")
    p.add_argument("--format", choices=("json", "csv"), default="csv")

    p = sub.add_parser("tv", help="total variation profile with spectral bound")
    _family_options(p)
    p.add_argument("--start", help="state label, default the first state")
    p.add_argument("--r", default="0..10")
    p.add_argument("--format", choices=("json", "csv"), default="csv")

    p = sub.add_parser("mixing-time", help="E[T], n*_1/2 and the sandwich check")
    _family_options(p, orders=False)
    p.add_argument("--brute-force", action="store_true", help="scan s*(r) from kernel powers")

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--all", action="store_true", help="run every family (the default)")
    p.add_argument("--max-n", type=int, default=5)

    p = sub.add_parser("limits", help="finite-n separation against limit curves")
    p.add_argument("--kind", choices=mx.LIMIT_KINDS, required=True)
    p.add_argument("--c", default="0.5", help="comma-separated c values")
    p.add_argument("--n-values", default="20,40", help="comma-separated levels")

    p = sub.add_parser("shift-check", help="up-down versus shifted down-up separation")
    _family_options(p, orders=False)
    p.add_argument("--R", type=int, default=15)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = _config(args)
        text = COMMANDS[args.command](cfg, args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (VerificationFailure, SpectrumMismatchError) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ValidationError, ConfigurationError, NotApplicableError, LatticeWalkError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
