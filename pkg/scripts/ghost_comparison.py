"""Compare finite-difference and exponential Neumann ghosts on the Neumann front.

The exponential ghost differs from the finite-difference one by
dx^2 b^2 / (2 U) at each wall. The boundary flux divides that by dx, so the
global error picks up an O(dx) term; this script shows the two slopes side by
side.
"""

import argparse

from dtrw.experiments import DX_LADDER, ExperimentConfig, run_ladder
from dtrw.oracle import convergence_order


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dx", action="append", help="defaults to the six CFL-safe spacings")
    args = ap.parse_args()
    dxs = args.dx or list(DX_LADDER[4:])

    runs = {g: run_ladder(ExperimentConfig(preset="example2-neumann", dx_list=dxs, ghost=g)) for g in ("fd", "exp")}
    print(f"{'dx':>10} {'fd':>12} {'exp':>12}")
    for a, b in zip(runs["fd"], runs["exp"]):
        print(f"{a.dx:10.5g} {a.record.l1_error:12.5g} {b.record.l1_error:12.5g}")
    for g, rs in runs.items():
        print(f"{g} order (finest four): {convergence_order([r.record for r in rs], finest=4):.3f}")


if __name__ == "__main__":
    main()
