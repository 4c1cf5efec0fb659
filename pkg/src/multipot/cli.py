"""Command-line front end.

Exit codes: 0 success, 1 configuration error, 2 geometry validation,
3 solver failure, 4 file IO, 5 a ``verify`` check failed.  Failures print one line
``error=<kind> reason=<message>`` to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import (
    ConfigError,
    EvaluationError,
    FlowError,
    GeometryError,
    OutputError,
    SeedInvalid,
    SolverError,
    SpectralError,
)
from .field_io import (
    FORMATS,
    GridSpec,
    auto_seeds,
    default_box,
    sample_field,
    trace_streamline,
    write_field,
    write_streamlines,
)
from .problem import EXAMPLES, example, load_archive, load_config, save_archive, save_config
from .solver import solve_flow
from .verify import run_invariants

log = logging.getLogger("multipot")

EXIT_VERIFY_FAILED = 5

EXIT_CODES = [
    (ConfigError, 1, "config"),
    (GeometryError, 2, "geometry"),
    (SolverError, 3, "solver"),
    (SpectralError, 3, "solver"),
    (EvaluationError, 3, "solver"),
    (OutputError, 4, "io"),
]


class _Failure(Exception):
    def __init__(self, code, kind, message):
        super().__init__(message)
        self.code, self.kind = code, kind


def _fail(exc: FlowError):
    for cls, code, kind in EXIT_CODES:
        if isinstance(exc, cls):
            return _Failure(code, kind, str(exc))
    return _Failure(3, "solver", str(exc))


class _Parser(argparse.ArgumentParser):
    """Usage errors are configuration errors (exit 1), not argparse's exit 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"error=config reason={message}\n")


def cmd_solve(args) -> int:
    problem = load_config(args.config).with_overrides(args.m, args.n)
    geom = problem.geometry()
    density = solve_flow(problem.flow_config(), geom)
    save_archive(args.output, problem, geom, density)
    d = density.diagnostics
    print(f"solved {len(geom)} contours, {d['unknowns']} unknowns: "
          f"residual={d['residual']:.3e} condition~{d['condition_estimate']:.3e}")
    return 0


def _box(args, pot):
    return GridSpec.parse(args.grid).box if args.grid else default_box(pot)


def cmd_field(args) -> int:
    _, pot = load_archive(args.archive)
    spec = GridSpec.parse(args.grid)
    write_field(sample_field(pot, spec), args.output, args.format)
    return 0


def _parse_seeds(text: str) -> list[complex]:
    seeds = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        try:
            x, y = (float(v) for v in part.split(","))
        except ValueError:
            raise ConfigError(f"bad seed {part!r}; expected 'x,y'") from None
        seeds.append(complex(x, y))
    return seeds


def cmd_streamlines(args) -> int:
    _, pot = load_archive(args.archive)
    box = _box(args, pot)
    if args.seeds:
        seeds = _parse_seeds(args.seeds)
    else:
        seeds = auto_seeds(pot, box, args.auto_seeds)
    step = args.step if args.step else 0.01 * pot.geom.diameter
    lines = []
    for seed in seeds:
        try:
            lines.append((seed, trace_streamline(pot, seed, step, args.max_steps, box)))
        except SeedInvalid as exc:
            print(f"warning: skipped seed {seed.real},{seed.imag}: {exc}", file=sys.stderr)
    write_streamlines(lines, args.output)
    return 0


def cmd_verify(args) -> int:
    _, pot = load_archive(args.archive)
    checks = run_invariants(pot)
    for check in checks:
        print(check.line())
    return 0 if all(c.passed for c in checks) else EXIT_VERIFY_FAILED


def cmd_examples(args) -> int:
    names = list(EXAMPLES) if args.name == "all" else [args.name]
    for name in names:
        example(name)
    out = Path(args.output)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create {out}: {exc}") from None
    for name in names:
        path = out / f"{name}.json"
        save_config(example(name), path)
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="multipot", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve a problem file into a solution archive")
    p.add_argument("--config", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--m", type=int, help="truncation order override")
    p.add_argument("--n", type=int, help="quadrature size override")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("field", help="sample velocity and stream function on a grid")
    p.add_argument("archive")
    p.add_argument("--grid", required=True, help="xmin,xmax,ymin,ymax,nx,ny")
    p.add_argument("--format", choices=FORMATS, default="csv")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("streamlines", help="trace streamlines")
    p.add_argument("archive")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--seeds", help="'x,y;x,y;...'")
    group.add_argument("--auto-seeds", type=int, default=10, metavar="K")
    p.add_argument("--grid", help="bounding box as xmin,xmax,ymin,ymax,nx,ny (nx, ny unused)")
    p.add_argument("--step", type=float)
    p.add_argument("--max-steps", type=int, default=2000)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_streamlines)

    p = sub.add_parser("verify", help="check physical invariants of a solution")
    p.add_argument("archive")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("examples", help="write built-in example problem files")
    p.add_argument("name", help=f"one of {', '.join(EXAMPLES)} or 'all'")
    p.add_argument("--output", required=True, help="output directory")
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        try:
            return args.func(args)
        except FlowError as exc:
            raise _fail(exc) from exc
    except _Failure as failure:
        reason = str(failure).replace("\n", " ")
        print(f"error={failure.kind} reason={reason}", file=sys.stderr)
        return failure.code


if __name__ == "__main__":
    sys.exit(main())
