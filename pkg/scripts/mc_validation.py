"""Particle ensemble against the master-equation density on a sine-force ring.

Prints the total-variation distance for growing ensembles; it should fall
like N^(-1/2).
"""

import argparse

import numpy as np

from dtrw.montecarlo import EnsembleConfig, master_density, simulate_ensemble, sine_ring, tv_distance


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sites", type=int, default=32)
    ap.add_argument("--steps", type=int, default=50)
    ap.add_argument("--amplitude", type=float, default=1.0)
    ap.add_argument("--replicates", type=int, default=10)
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args()

    lat, force, tg = sine_ring(args.sites, args.amplitude)
    start = args.sites // 2
    exact = master_density(EnsembleConfig(lat, force, tg, 1, args.steps), start)
    prev = None
    for n in (6_250, 25_000, 100_000, 400_000, 1_600_000):
        tvs = [
            tv_distance(simulate_ensemble(EnsembleConfig(lat, force, tg, n, args.steps, seed=s), start, args.workers), exact)
            for s in range(args.replicates)
        ]
        med = float(np.median(tvs))
        shrink = f"  x{prev / med:.2f}" if prev else ""
        print(f"N={n:>9}  median TV {med:.5f}{shrink}")
        prev = med


if __name__ == "__main__":
    main()
