"""Command-line entry points: sweep driver, single-trajectory inspector, selftest.

Exit codes: 0 on success, 2 for configuration problems, 3 for I/O failures,
1 for any other solver failure (and for selftest regressions).
"""

from __future__ import annotations

import argparse
import sys
import tempfile
import time
from pathlib import Path

from .diagnostics import conserved_quantities
from .errors import ConfigError, IoError, SolverError
from .grid import PeriodicGrid
from .harness import load_config, run_convergence_sweep, write_records
from .problems import build_problem
from .schemes import SchemeSpec, TimeMarch, evolve
from .wave import reconstruct_wave

_RUN_SCHEME_KINDS = {
    "lie": "lie_1234",
    "strang": "strang_palindromic",
    "tssp2": "tssp_strang",
    "tssp4": "tssp_yoshida4",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wkbsplit",
        description="Splitting schemes for semiclassical wave propagation in phase/amplitude form.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a convergence sweep from a config file")
    sweep.add_argument("--config", required=True, help="path to a key = value config file")
    sweep.add_argument("--output", default=None, help="CSV destination (overrides the config's output key)")

    run = sub.add_parser("run", help="march one trajectory and print conserved quantities")
    run.add_argument("--scheme", required=True, choices=sorted(_RUN_SCHEME_KINDS))
    run.add_argument("--eps", required=True, type=float)
    run.add_argument("--nx", required=True, type=int)
    run.add_argument("--nt", required=True, type=int)
    run.add_argument("--tfinal", required=True, type=float)

    sub.add_parser("selftest", help="exercise the sweep invariants on a miniature problem")
    return parser


def _cmd_sweep(args) -> int:
    cfg = load_config(Path(args.config))
    records = run_convergence_sweep(cfg)
    destination = args.output if args.output is not None else cfg.output_path
    write_records(records, destination)
    diverged = sum(1 for r in records if r.status != "ok")
    print(f"wrote {len(records)} records to {destination}" + (f" ({diverged} diverged)" if diverged else ""))
    return 0


def _sample_steps(n_steps: int, samples: int = 10):
    stride = max(1, n_steps // samples)
    return {step for step in range(stride, n_steps + 1, stride)} | {n_steps}


def _print_report(t: float, report) -> None:
    print(
        f"t = {t:8.5f}   mass = {report.mass:.12e}   "
        f"momentum = {report.momentum: .12e}   energy = {report.energy:.12e}"
    )


def _cmd_run(args) -> int:
    grid = PeriodicGrid(args.nx)
    problem = build_problem(grid)
    spec = SchemeSpec(_RUN_SCHEME_KINDS[args.scheme], args.eps, problem.potential)
    march = TimeMarch.from_final_time(args.tfinal, args.nt)
    if args.scheme.startswith("tssp"):
        initial = reconstruct_wave(problem.initial, args.eps)
    else:
        initial = problem.initial
    wanted = _sample_steps(march.n_steps)

    def observer(step, t, state):
        if step in wanted:
            return t, conserved_quantities(state, problem.potential, eps=args.eps)
        return None

    print(f"scheme = {args.scheme}   eps = {args.eps:g}   nx = {args.nx}   "
          f"nt = {args.nt}   t_final = {args.tfinal:g}")
    _print_report(0.0, conserved_quantities(initial, problem.potential, eps=args.eps))
    _, outputs = evolve(initial, spec, march, observer=observer)
    for entry in outputs:
        if entry is not None:
            _print_report(entry[0], entry[1])
    return 0


def _selftest_checks(workdir: Path):
    base = (
        "scheme = strang\n"
        "eps = 0.25, 0.0625\n"
        "nx = 32\n"
        "nt = 16, 32, 64\n"
        "nx_ref = 64\n"
        "nt_ref = 512\n"
        "nx_ref_wave = 128\n"
        f"cache_dir = {workdir / 'cache'}\n"
    )
    first = run_convergence_sweep(load_config(base))
    second = run_convergence_sweep(load_config(base))

    def strip_clock(records):
        return [
            (r.scheme, r.eps, r.nx, r.nt, r.h, r.dx, r.t_final, r.err_rho,
             r.err_psi, r.err_sa, r.mass_drift_rel, r.status, r.reference_id)
            for r in records
        ]

    yield "deterministic rerun", strip_clock(first) == strip_clock(second)

    for entry in (workdir / "cache").iterdir():
        entry.unlink()
    fresh = run_convergence_sweep(load_config(base))
    deviation = max(
        abs(a.err_sa - b.err_sa) for a, b in zip(first, fresh)
    )
    yield "cache rebuild matches", deviation <= 1e-14

    for eps in (0.25, 0.0625):
        series = [r.err_sa for r in sorted(first, key=lambda r: r.nt) if r.eps == eps]
        yield (
            f"errors shrink with refinement (eps = {eps:g})",
            all(later <= 1.05 * earlier for earlier, later in zip(series, series[1:])),
        )

    self_compare = run_convergence_sweep(load_config(
        "scheme = strang\n"
        "eps = 0.25\n"
        "nx = 64\n"
        "nt = 512\n"
        "nx_ref = 64\n"
        "nt_ref = 512\n"
        "nx_ref_wave = 128\n"
        f"cache_dir = {workdir / 'cache'}\n"
    ))
    yield "self-comparison vanishes", self_compare[0].err_sa <= 1e-12


def _cmd_selftest() -> int:
    failures = 0
    started = time.perf_counter()
    with tempfile.TemporaryDirectory(prefix="wkbsplit-selftest-") as tmp:
        workdir = Path(tmp)
        (workdir / "cache").mkdir()
        for name, passed in _selftest_checks(workdir):
            print(f"{'ok' if passed else 'FAIL':4s} {name}")
            failures += 0 if passed else 1
    print(f"selftest {'passed' if failures == 0 else f'FAILED ({failures})'} "
          f"in {time.perf_counter() - started:.1f}s")
    return 0 if failures == 0 else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_selftest()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except IoError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
