#!/usr/bin/env python3
"""Temporal-order study on the smooth window, one sweep per splitting scheme.

Runs the first-order composition on a 128-point grid and the palindromic
composition on a 256-point grid over the full scale ladder, writes one CSV
per scheme, and prints fitted convergence slopes per scale. The CSVs feed
the figure renderer in frontend/.
"""

import argparse
from pathlib import Path

import numpy as np

from wkbsplit.harness import load_config, run_convergence_sweep, write_records


def fitted_slope(records, eps, metric):
    points = sorted(
        (r.h, getattr(r, metric))
        for r in records
        if r.eps == eps and r.status == "ok"
    )
    h, err = zip(*points)
    return float(np.polyfit(np.log(h), np.log(err), 1)[0])


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--output-dir", type=Path, default=Path("results"))
    parser.add_argument("--cache-dir", type=Path, default=Path("reference_cache"))
    args = parser.parse_args(argv)
    args.output_dir.mkdir(parents=True, exist_ok=True)

    for scheme, nx in (("lie", 128), ("strang", 256)):
        cfg = load_config(
            f"scheme = {scheme}\nnx = {nx}\ncache_dir = {args.cache_dir}\n"
        )
        records = run_convergence_sweep(cfg)
        out = args.output_dir / f"sweep_{scheme}_time.csv"
        write_records(records, out)
        print(f"{scheme}: wrote {len(records)} records to {out}")
        for eps in cfg.eps_values:
            print(
                f"  eps = {eps:<12g} err_sa slope "
                f"{fitted_slope(records, eps, 'err_sa'):6.3f}   "
                f"err_rho slope {fitted_slope(records, eps, 'err_rho'):6.3f}"
            )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
