"""Command-line front end.

Exit codes:
  0   success
  1   counterexample reported
  2   hypothesis not applicable
  3   infeasible, singular or over the grid budget
  64  usage error
  65  parse error
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .bounds import bound_report
from .errors import (BudgetExceeded, Infeasible, NotApplicable, ParseError,
                     PreconditionViolated, Singular)
from .fileio import Manifest, read_measure
from .groups import parse_group
from .inversion import DEFAULT_TOL, dense_invert, neumann_invert, nikolski_invert
from .search import CLAIMS, SearchConfig, adversarial_atom_test, gap_sweep, sweep_to_csv
from .spectra import profile_to_csv, refine_until, spectral_min, spectrum_delta, transform, transform_grid

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_NOT_APPLICABLE = 2
EXIT_INFEASIBLE = 3
EXIT_USAGE = 64
EXIT_PARSE = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    items = [t for t in text.replace(" ", "").split(",") if t]
    try:
        return [float(t) for t in items]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}") from None


def _write(outdir: Path, name: str, text: str) -> Path:
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / name
    path.write_text(text)
    return path


def _search_flags(p: argparse.ArgumentParser):
    p.add_argument("--group", required=True, help='e.g. "Z32", "Z2^4", "Z^3"')
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--scale", type=float, default=0.05, help="initial proposal scale")
    p.add_argument("--decay", type=float, default=0.999, help="per-step scale decay")
    p.add_argument("--real-only", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, type=Path)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="measinv", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("transform", help="transform values and spectral minimum")
    p.add_argument("measure", type=Path)
    p.add_argument("--mesh", type=int, help="grid size per axis (lattice groups)")
    p.add_argument("--target-gap", type=float, default=1e-3,
                   help="refine lattice grids until the certificate gap is this small")
    p.add_argument("--max-mesh", type=int, default=None)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("invert", help="invert a measure")
    p.add_argument("measure", type=Path)
    p.add_argument("--method", choices=("dense", "neumann", "nikolski", "auto"), default="auto")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--target-gap", type=float, default=1e-3)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("bounds", help="per-theorem bound report")
    p.add_argument("measure", type=Path)
    p.add_argument("--delta-from", choices=("exact", "grid"), default=None)
    p.add_argument("--target-gap", type=float, default=1e-3)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("sweep", help="extremal inverse norms over a delta grid")
    p.add_argument("--deltas", type=_float_list, required=True, help="comma-separated list")
    _search_flags(p)

    p = sub.add_parser("adversarial", help="search for counterexamples to an atom-mass claim")
    p.add_argument("--claim", choices=CLAIMS, required=True)
    p.add_argument("--delta", type=float, required=True)
    _search_flags(p)
    return parser


def _cmd_transform(args) -> int:
    manifest = Manifest("transform", _echo(args), inputs=[args.measure])
    mu = read_measure(args.measure)
    if mu.group.is_finite:
        if args.mesh is not None:
            raise UsageError("--mesh applies to lattice groups only")
        profile = transform(mu)
    elif args.mesh is not None:
        profile = transform_grid(mu, args.mesh)
    else:
        max_mesh = args.max_mesh or {1: 1 << 20, 2: 2048}.get(mu.group.rank, 128)
        profile = refine_until(mu, args.target_gap, max_mesh)
    lower, observed = spectral_min(profile)
    _write(args.out, "spectrum.csv", profile_to_csv(profile))
    summary = (f"delta_lower={lower!r} delta_observed={observed!r} "
               f"exact={int(profile.exact)} gap={profile.certified_max_gap!r}")
    manifest.write(args.out, summary=summary)
    print(summary)
    return EXIT_OK


def _cmd_invert(args) -> int:
    manifest = Manifest("invert", _echo(args), inputs=[args.measure])
    mu = read_measure(args.measure)
    method = args.method
    if method == "dense":
        result = dense_invert(mu)
    elif method == "neumann":
        result = neumann_invert(mu, args.tol)
    elif method == "nikolski":
        delta, _ = spectrum_delta(mu, args.target_gap)
        result = nikolski_invert(mu, delta, args.tol)
    else:
        result = _auto_invert(mu, args)
    _write(args.out, "inversion.json", result.to_json() + "\n")
    summary = (f"method={result.method} norm={result.inverse_norm!r} "
               f"residual={result.residual!r} guarantee={result.guarantee!r}")
    manifest.write(args.out, summary=summary)
    print(summary)
    return EXIT_OK


def _auto_invert(mu, args):
    # Neumann, then the hermitian square, then the dense oracle
    failures = []
    try:
        return neumann_invert(mu, args.tol)
    except NotApplicable as exc:
        failures.append(str(exc))
    try:
        delta, _ = spectrum_delta(mu, args.target_gap)
        return nikolski_invert(mu, delta, args.tol)
    except NotApplicable as exc:
        failures.append(str(exc))
    if mu.group.is_finite:
        return dense_invert(mu)
    raise NotApplicable("; ".join(failures))


def _cmd_bounds(args) -> int:
    manifest = Manifest("bounds", _echo(args), inputs=[args.measure])
    mu = read_measure(args.measure)
    source = args.delta_from or ("exact" if mu.group.is_finite else "grid")
    if source == "exact" and not mu.group.is_finite:
        raise UsageError("exact delta is available for finite groups only; use --delta-from grid")
    if source == "grid" and mu.group.is_finite:
        raise UsageError("grid delta applies to lattice groups; use --delta-from exact")
    delta, profile = spectrum_delta(mu, args.target_gap)
    report = bound_report(mu, delta, delta_source=source,
                          delta_gap=profile.certified_max_gap)
    _write(args.out, "bounds.json", report.to_json() + "\n")
    manifest.write(args.out)
    print(f"delta={delta!r} observed_inverse_norm={report.observed_inverse_norm!r}")
    for name, v in report.verdicts.items():
        print(f"{name:14s} {v.status:16s} "
              f"{'' if v.predicted is None else repr(v.predicted):24s} {v.reason}")
    return EXIT_OK


def _config(args, delta: float) -> SearchConfig:
    return SearchConfig(parse_group(args.group), delta, real_only=args.real_only,
                        restarts=args.restarts, steps=args.steps, scale=args.scale,
                        decay=args.decay, seed=args.seed, workers=args.workers)


def _cmd_sweep(args) -> int:
    if not args.deltas:
        raise UsageError("--deltas must list at least one value")
    for d in args.deltas:
        if not 0.5 < d <= 1:
            raise UsageError(f"delta {d} outside (1/2, 1]")
    manifest = Manifest("sweep", _echo(args), seed=args.seed)
    cfg = _config(args, args.deltas[0])
    rows = gap_sweep(cfg.group, args.deltas, cfg)
    _write(args.out, "sweep.csv", sweep_to_csv(rows))
    manifest.write(args.out, infeasible_rows=[r.delta for r in rows if r.infeasible])
    for r in rows:
        print(f"delta={r.delta!r} best_norm={r.best_norm!r} latw={r.latw_bound!r} "
              f"nikolski={r.nikolski_bound!r}")
    return EXIT_OK


def _cmd_adversarial(args) -> int:
    manifest = Manifest("adversarial", _echo(args), seed=args.seed)
    cfg = _config(args, args.delta)
    out = adversarial_atom_test(cfg, args.claim)
    from .fileio import measure_to_dict
    doc = {
        "claim": out.claim,
        "violation_found": out.violation_found,
        "best_gap": out.best_gap,
        "incumbents_checked": out.incumbents_checked,
        "certificate_disagreements": out.certificate_disagreements,
        "trace": [float(t) for t in out.trace],
        "witness": None if out.witness is None else measure_to_dict(out.witness),
    }
    _write(args.out, "adversarial.json", json.dumps(doc, indent=2) + "\n")
    manifest.write(args.out)
    print(f"claim={out.claim} violation_found={out.violation_found} best_gap={out.best_gap!r}")
    return EXIT_VIOLATION if out.violation_found or out.certificate_disagreements else EXIT_OK


def _echo(args) -> dict:
    return {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()}


COMMANDS = {
    "transform": _cmd_transform,
    "invert": _cmd_invert,
    "bounds": _cmd_bounds,
    "sweep": _cmd_sweep,
    "adversarial": _cmd_adversarial,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NotApplicable, PreconditionViolated) as exc:
        print(f"not applicable: {exc}", file=sys.stderr)
        return EXIT_NOT_APPLICABLE
    except (Singular, Infeasible, BudgetExceeded) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
