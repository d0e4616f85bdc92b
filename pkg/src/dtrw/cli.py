"""Command-line entry point: ``dtrw run | mc | converge``."""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

import numpy as np

from .errors import DTRWError
from .experiments import PRESETS, ExperimentConfig, fmt, read_summary, run_ladder, summary_row
from .montecarlo import EnsembleConfig, master_density, simulate_ensemble, sine_ring, tv_distance
from .oracle import convergence_order


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dtrw", description="Discrete-time random walk solver for 1-D advection-diffusion.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a preset or custom experiment over a dx ladder")
    run.add_argument("--config", type=Path, help="JSON file mirroring ExperimentConfig; flags override it")
    run.add_argument("--preset", choices=PRESETS)
    run.add_argument("--nu", type=float)
    run.add_argument("--c", type=float)
    run.add_argument("--dx", action="append", help="lattice spacing, fractions allowed (repeatable)")
    run.add_argument("--t", dest="target_t", help="target time, fractions allowed")
    run.add_argument("--weights", choices=("boltzmann1", "boltzmann2", "naive"))
    run.add_argument("--ghost", choices=("fd", "exp"))
    run.add_argument("--bc-left", dest="bc_left", help="KIND[:FUNC], e.g. dirichlet:front, neumann:zero, zero-flux")
    run.add_argument("--bc-right", dest="bc_right")
    run.add_argument("--force", choices=("burgers", "diffusion"))
    run.add_argument("--initial", choices=("front", "constant", "gaussian", "sine"))
    run.add_argument("--steps", dest="n_steps", type=int, help="custom preset: fixed step count instead of --t")
    run.add_argument("--snap", action="store_true", default=None, help="round the target time to the nearest step")
    run.add_argument("--out", dest="output_dir")
    run.add_argument("--seed", type=int)
    run.add_argument("--trace-error", dest="trace_error", action="store_true", default=None)

    mc = sub.add_parser("mc", help="Monte Carlo validation of the master equation on a sine-force ring")
    mc.add_argument("--sites", type=int, default=32)
    mc.add_argument("--steps", type=int, default=50)
    mc.add_argument("--particles", type=int, action="append", help="ensemble sizes (repeatable)")
    mc.add_argument("--replicates", type=int, default=10)
    mc.add_argument("--amplitude", type=float, default=1.0)
    mc.add_argument("--beta", type=float, default=1.0)
    mc.add_argument("--seed", type=int, default=0)
    mc.add_argument("--out", dest="output_dir", default="mc_out")

    conv = sub.add_parser("converge", help="fit the convergence order from a summary CSV")
    conv.add_argument("summary", type=Path)
    conv.add_argument("--finest", type=int, default=4, help="fit only the N smallest dx (0 = all)")
    return p


def cmd_run(args) -> int:
    overrides = {k: getattr(args, k) for k in (
        "preset", "nu", "c", "target_t", "weights", "ghost", "bc_left", "bc_right", "force",
        "initial", "n_steps", "snap", "output_dir", "seed", "trace_error",
    )}
    if args.dx:
        overrides["dx_list"] = args.dx
    overrides = {k: v for k, v in overrides.items() if v is not None}
    cfg = ExperimentConfig.from_json(args.config, **overrides) if args.config else ExperimentConfig(**overrides)
    results = run_ladder(cfg)
    w = csv.DictWriter(sys.stdout, fieldnames=list(summary_row(results[0]).keys()), lineterminator="\n")
    w.writeheader()
    for r in results:
        w.writerow(summary_row(r))
    records = [r.record for r in results if r.record is not None]
    if len(records) >= 3:
        try:
            print(f"# order (finest {min(4, len(records))}): {convergence_order(records, finest=4):.4f}", file=sys.stderr)
        except DTRWError as exc:
            print(f"# order: {exc}", file=sys.stderr)
    return 0 if all(r.ok for r in results) else 1


def cmd_mc(args) -> int:
    lat, force, tg = sine_ring(args.sites, args.amplitude, args.beta)
    sizes = args.particles or [100_000]
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    start = args.sites // 2
    base = EnsembleConfig(lat, force, tg, sizes[0], args.steps, args.seed)
    exact = master_density(base, start)
    emp = simulate_ensemble(base, start)
    with (out / "density.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("site", "x", "empirical", "master"))
        for i, (x, e, m) in enumerate(zip(lat.x, emp, exact)):
            w.writerow((i, fmt(x), fmt(e), fmt(m)))
    with (out / "tv_vs_n.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("n_particles", "tv_median", "tv_min", "tv_max"))
        for n in sizes:
            tvs = [
                tv_distance(simulate_ensemble(EnsembleConfig(lat, force, tg, n, args.steps, args.seed + k), start), exact)
                for k in range(args.replicates)
            ]
            w.writerow((n, fmt(np.median(tvs)), fmt(min(tvs)), fmt(max(tvs))))
            print(f"N={n}: median TV {np.median(tvs):.5f}")
    return 0


def cmd_converge(args) -> int:
    records = read_summary(args.summary)
    slope = convergence_order(records, finest=args.finest or None)
    print(fmt(slope))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return {"run": cmd_run, "mc": cmd_mc, "converge": cmd_converge}[args.command](args)
    except DTRWError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
