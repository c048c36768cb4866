#!/usr/bin/env python3
"""Spatial-resolution study: error against grid size at a tiny time step.

Doubles the grid from 8 to 128 points with the time step pinned small enough
that the spatial error dominates, then prints the joint phase/amplitude error
per scale so the spectral decay is visible row by row.
"""

import argparse
from pathlib import Path

from wkbsplit.harness import load_config, run_convergence_sweep, write_records


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--output-dir", type=Path, default=Path("results"))
    parser.add_argument("--cache-dir", type=Path, default=Path("reference_cache"))
    args = parser.parse_args(argv)
    args.output_dir.mkdir(parents=True, exist_ok=True)

    cfg = load_config(
        "scheme = strang\n"
        "nx = 8, 16, 32, 64, 128\n"
        "nt = 8192\n"
        f"cache_dir = {args.cache_dir}\n"
    )
    records = run_convergence_sweep(cfg)
    out = args.output_dir / "sweep_strang_space.csv"
    write_records(records, out)
    print(f"wrote {len(records)} records to {out}")

    header = "  ".join(f"nx={nx:<4d}" for nx in cfg.nx_values)
    print(f"{'eps':<12}  {header}")
    for eps in cfg.eps_values:
        row = {r.nx: r.err_sa for r in records if r.eps == eps}
        cells = "  ".join(f"{row[nx]:7.1e}" for nx in cfg.nx_values)
        print(f"{eps:<12g}  {cells}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
