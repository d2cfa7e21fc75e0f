"""Command-line front end: ``channel-bounds <command> ...``.

Exit codes: 0 success, 1 usage or parse error, 2 solver flagged
non-convergence, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io as _stringio
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io
from .bounds import CSV_COLUMNS, BoundReport, bound_report, twirled_np
from .channels import mixed_channel_np
from .diamond import diamond_distance
from .entmeasures import MeasureKind, OptimizerConfig, SubsystemCut, measure
from .sampling import random_density, rng_from
from .twirl import (
    approx_covariance_epsilon,
    one_design_deviation,
    teleport_simulate_twirl,
    twirl_channel,
    twirled_covariance_deviation,
)
from .verify import SUITES, run_suite

EXIT_OK, EXIT_USAGE, EXIT_FLAGGED, EXIT_FAILED = 0, 1, 2, 3
SEED_ENV = "CHANNEL_BOUNDS_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x) -> str:
    """Six significant digits for terminal output."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.6g}"


@dataclass(frozen=True)
class SweepConfig:
    p_min: float = 0.0
    p_max: float = 1.0
    steps: int = 11
    seed: int = 0
    out_path: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if not (0.0 <= self.p_min <= self.p_max <= 1.0):
            raise UsageError("need 0 <= p-min <= p-max <= 1")
        if self.steps < 1:
            raise UsageError("steps must be at least 1")
        if self.format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.format!r}")

    def grid(self) -> list[float]:
        if self.steps == 1:
            return [self.p_min]
        return [float(p) for p in np.linspace(self.p_min, self.p_max, self.steps)]


# -- shared options -------------------------------------------------------------------

def _global_options(defaults: bool) -> argparse.ArgumentParser:
    """Global flags, accepted both before and after the subcommand."""
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--seed", type=int, default=d(None), help=f"RNG seed (fallback: ${SEED_ENV}, then 0)")
    g.add_argument("--jobs", type=int, default=d(1), help="worker processes for sweeps")
    g.add_argument("--tol", type=float, default=d(None), help="solver tolerance override")
    g.add_argument("--out", default=d(None), help="write full-precision results to this file")
    g.add_argument("--format", choices=("csv", "json"), default=d("csv"), help="file format for --out")
    return g


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"${SEED_ENV} must be an integer, got {env!r}") from None


def _optimizer_config(args, seed: int) -> OptimizerConfig:
    if args.tol is None:
        return OptimizerConfig(rng_seed=seed)
    return OptimizerConfig(rng_seed=seed, grad_tolerance=args.tol)


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from exc


def _emit_record(args, record: dict) -> None:
    if not args.out:
        return
    if args.format == "json":
        _write(args.out, io.dumps(record) + "\n")
    else:
        flat = {k: v for k, v in io.to_jsonable(record).items() if not isinstance(v, (list, dict))}
        buf = _stringio.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(flat.keys())
        w.writerow([repr(v) if isinstance(v, float) else v for v in flat.values()])
        _write(args.out, buf.getvalue())


# -- bounds sweep ---------------------------------------------------------------------

def _sweep_row(task) -> BoundReport:
    p, seed, tol = task
    cfg = OptimizerConfig(rng_seed=seed) if tol is None else OptimizerConfig(rng_seed=seed, grad_tolerance=tol)
    return bound_report(p, cfg, diamond_tol=1e-6 if tol is None else tol, seed=seed)


def run_sweep(cfg: SweepConfig, jobs: int = 1, tol: float | None = None) -> list[BoundReport]:
    """One :class:`BoundReport` per grid point, in grid order."""
    tasks = [(p, cfg.seed, tol) for p in cfg.grid()]
    if jobs <= 1 or len(tasks) == 1:
        return [_sweep_row(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_sweep_row, tasks))


def sweep_csv(rows: list[BoundReport]) -> str:
    buf = _stringio.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([repr(float(x)) for x in r.csv_row()])
    return buf.getvalue()


def sweep_json(rows: list[BoundReport]) -> str:
    return io.dumps([r.to_dict() for r in rows]) + "\n"


def cmd_bounds_sweep(args) -> int:
    seed = _resolve_seed(args)
    cfg = SweepConfig(args.p_min, args.p_max, args.steps, seed, args.out, args.format)
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    rows = run_sweep(cfg, args.jobs, args.tol)
    text = sweep_csv(rows) if cfg.format == "csv" else sweep_json(rows)
    if cfg.out_path:
        _write(cfg.out_path, text)
        summary = sys.stdout
    else:
        sys.stdout.write(text)
        summary = sys.stderr
    print(" ".join(f"{c:>18}" for c in CSV_COLUMNS), file=summary)
    for r in rows:
        print(" ".join(f"{fmt(x):>18}" for x in r.csv_row()), file=summary)
    for label, r in (("first", rows[0]), ("last", rows[-1])):
        print(f"{label} p={fmt(r.p)}: upper_ska={fmt(r.upper_ska)} lower_coherent={fmt(r.lower_coherent)} "
              f"lower_rev_coherent={fmt(r.lower_rev_coherent)}", file=summary)
    status = EXIT_OK
    for r in rows:
        if not r.consistent():
            print(f"VIOLATION p={fmt(r.p)}: upper_ska below a lower bound", file=summary)
            status = EXIT_FAILED
        if not r.converged:
            print(f"FLAGGED p={fmt(r.p)}: a solver did not converge", file=summary)
            status = max(status, EXIT_FLAGGED) if status != EXIT_FAILED else status
    return status


# -- measure --------------------------------------------------------------------------

def cmd_measure(args) -> int:
    seed = _resolve_seed(args)
    rho, dims = io.state_from_json(args.state)
    left = args.left if args.left is not None else [0]
    try:
        cut = SubsystemCut(dims, left)
        kind = MeasureKind.parse(args.kind)
        res = measure(kind, rho, cut, _optimizer_config(args, seed))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(f"kind={res.kind} value={fmt(res.value)} certificate={fmt(res.certificate)} "
          f"iterations={res.iterations} converged={res.converged}")
    _emit_record(args, res.to_dict())
    if not res.converged:
        print("FLAGGED: optimizer did not reach the gradient tolerance; value is an upper estimate", file=sys.stderr)
        return EXIT_FLAGGED
    return EXIT_OK


# -- diamond --------------------------------------------------------------------------

def _diamond_pair(args):
    first = [x for x in (args.channel_a, args.np) if x is not None]
    second = [x for x in (args.channel_b, args.np_twirled) if x is not None]
    if len(first) != 1 or len(second) != 1:
        raise UsageError("give exactly two channels: files, or --np P / --np-twirled P")
    A = mixed_channel_np(args.np) if args.np is not None else io.channel_from_json(args.channel_a)
    B = twirled_np(args.np_twirled) if args.np_twirled is not None else io.channel_from_json(args.channel_b)
    return A, B


def cmd_diamond(args) -> int:
    seed = _resolve_seed(args)
    for p in (args.np, args.np_twirled):
        if p is not None and not 0.0 <= p <= 1.0:
            raise UsageError("p must lie in [0, 1]")
    if args.np is not None and args.channel_b is None and args.channel_a is not None:
        args.channel_b, args.channel_a = args.channel_a, None
    A, B = _diamond_pair(args)
    try:
        res = diamond_distance(A, B, tol=args.tol or 1e-6, seed=seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(f"value={fmt(res.value)} lower_bound={fmt(res.lower_bound)} bracket={fmt(res.bracket)} "
          f"iterations={res.iterations} converged={res.converged}")
    _emit_record(args, res.to_dict())
    return EXIT_OK if res.converged else EXIT_FLAGGED


# -- twirl ----------------------------------------------------------------------------

def cmd_twirl(args) -> int:
    seed = _resolve_seed(args)
    if (args.channel is None) == (args.np is None):
        raise UsageError("give a channel file or --np P")
    N = mixed_channel_np(args.np) if args.np is not None else io.channel_from_json(args.channel)
    rep = io.rep_from_json(args.rep)
    try:
        NG = twirl_channel(N, rep)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    record = {
        "rep": rep.label,
        "group_size": len(rep),
        "one_design_deviation": one_design_deviation(rep),
        "twirled_covariance_deviation": twirled_covariance_deviation(N, rep),
        "covariance_epsilon": approx_covariance_epsilon(N, rep, tol=args.tol or 1e-6, seed=seed),
        "twirled_channel": io.channel_to_json(NG),
    }
    if record["one_design_deviation"] <= 1e-9:
        rng = rng_from(seed)
        worst = 0.0
        for _ in range(args.samples):
            rho = random_density(N.dim_in, rng)
            worst = max(worst, float(np.max(np.abs(teleport_simulate_twirl(N, rep, rho) - NG(rho)))))
        record["teleport_max_deviation"] = worst
    for k, v in record.items():
        if k != "twirled_channel":
            print(f"{k}={v if isinstance(v, str) else fmt(v)}")
    if args.out:
        _write(args.out, io.dumps(record) + "\n")
    return EXIT_OK


# -- verify ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    seed = _resolve_seed(args)
    if args.samples is not None and args.samples < 1:
        raise UsageError("--samples must be at least 1")
    rep = run_suite(args.suite, args.samples, seed)
    for line in rep.lines():
        print(line)
    verdict = "PASS" if rep.passed else "FAIL"
    print(f"{verdict} {rep.suite}: {len(rep.checks)} checks, {len(rep.failures())} failed, "
          f"min margin {fmt(rep.min_margin())}")
    if args.out:
        records = [{"name": c.name, "value": c.value, "bound": c.bound, "margin": c.margin, "passed": c.passed}
                   for c in rep.checks]
        if args.format == "json":
            _write(args.out, io.dumps({"suite": rep.suite, "passed": rep.passed, "checks": records}) + "\n")
        else:
            buf = _stringio.StringIO()
            w = csv.DictWriter(buf, fieldnames=list(records[0]), lineterminator="\n")
            w.writeheader()
            for r in records:
                w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
            _write(args.out, buf.getvalue())
    return EXIT_OK if rep.passed else EXIT_FAILED


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _global_options(defaults=False)
    parser = _Parser(prog="channel-bounds", description=__doc__.splitlines()[0], parents=[_global_options(True)])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bounds", help="capacity bounds")
    bsub = b.add_subparsers(dest="bounds_command", required=True, parser_class=_Parser)
    s = bsub.add_parser("sweep", parents=[common], help="bound table over a grid of p")
    s.add_argument("--p-min", type=float, default=0.0)
    s.add_argument("--p-max", type=float, default=1.0)
    s.add_argument("--steps", type=int, default=11)
    s.set_defaults(func=cmd_bounds_sweep)

    m = sub.add_parser("measure", parents=[common], help="Rains or PPT relative entropy of a state file")
    m.add_argument("state", help="JSON state file")
    m.add_argument("--kind", default="rains", choices=[k.value for k in MeasureKind])
    m.add_argument("--left", type=int, nargs="+", help="subsystem indices of the first party (default: 0)")
    m.set_defaults(func=cmd_measure)

    d = sub.add_parser("diamond", parents=[common], help="half diamond-norm distance of two channels")
    d.add_argument("channel_a", nargs="?", help="JSON channel file")
    d.add_argument("channel_b", nargs="?", help="JSON channel file")
    d.add_argument("--np", type=float, help="use the mixture channel N_p as the first channel")
    d.add_argument("--np-twirled", type=float, help="use the X-twirled mixture channel as the second channel")
    d.set_defaults(func=cmd_diamond)

    t = sub.add_parser("twirl", parents=[common], help="twirl a channel and check the teleportation realization")
    t.add_argument("channel", nargs="?", help="JSON channel file")
    t.add_argument("--np", type=float, help="use the mixture channel N_p")
    t.add_argument("--rep", default="pauli", help="a built-in name (pauli, ix, iz) or a JSON file of U and V matrix lists")
    t.add_argument("--samples", type=int, default=20)
    t.set_defaults(func=cmd_twirl)

    v = sub.add_parser("verify", parents=[common], help="randomized verification suites")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--samples", type=int)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, io.FormatError) as exc:
        print(f"channel-bounds: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
