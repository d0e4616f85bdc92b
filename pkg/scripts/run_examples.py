"""Run both front presets over the full dx ladder and report convergence orders.

    python3 scripts/run_examples.py --out results/
"""

import argparse
from dataclasses import replace

from dtrw.experiments import ExperimentConfig, run_ladder
from dtrw.oracle import convergence_order


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--ghost", choices=("fd", "exp"), default="exp")
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args()

    base = ExperimentConfig(ghost=args.ghost)
    for preset in ("example1-dirichlet", "example2-neumann"):
        cfg = replace(base, preset=preset, output_dir=f"{args.out}/{preset}")
        results = run_ladder(cfg, args.workers)
        print(f"{preset} ({args.ghost} ghost)" if preset.startswith("example2") else preset)
        print(f"  {'dx':>10} {'steps':>6} {'l1 error':>12}  cfl")
        for r in results:
            err = f"{r.record.l1_error:12.5g}" if r.record else f"{'-':>12}"
            print(f"  {r.dx:10.5g} {r.report.n_steps:6d} {err}  {'violated' if r.cfl_static else 'ok'}")
        records = [r.record for r in results if r.record]
        print(f"  order over the four finest: {convergence_order(records, finest=4):.3f}\n")


if __name__ == "__main__":
    main()
