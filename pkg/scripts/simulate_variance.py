"""Monte Carlo against the master equation, and the spread of the final ibar as n grows.

    python3 scripts/simulate_variance.py [--runs 500] [--out results/]
"""

import argparse
from pathlib import Path

import numpy as np

from pushpull import EpidemicParams, generate, integrate, monte_carlo
from pushpull.outputs import write_table


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--runs", type=int, default=500)
    ap.add_argument("--steps", type=int, default=200)
    ap.add_argument("--seed", type=int, default=2012)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", type=Path, default=None)
    args = ap.parse_args()
    p = EpidemicParams(0.4, 0.6, 0.004)

    g = generate("erdos_renyi", 2000, 6001, args.seed)
    mc = monte_carlo(g, p, 0.2, args.steps, args.runs, 1, record_nodes=False, workers=args.workers)
    model = integrate(g, p, np.full(g.n, 0.2), args.steps)
    gap = np.abs(mc.ibar_mean - model.ibar)
    print(f"ER-2000: max |MC - model| = {gap.max():.4g} (t >= 10: {gap[10:].max():.4g})")

    rows = []
    for n in (250, 500, 1000, 2000, 4000):
        gn = generate("erdos_renyi", n, 3 * n + 1, args.seed)
        r = monte_carlo(gn, p, 0.2, args.steps, args.runs, 1, record_nodes=False, workers=args.workers)
        rows.append((n, r.ibar_mean[-1], r.final_std))
        print(f"n={n:>5}  final ibar={r.ibar_mean[-1]:.5f}  std={r.final_std:.5f}")

    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        write_table(args.out / "mc_vs_model", ("t", "i_bar_model", "i_bar_mc"),
                    [(t, model.ibar[t], mc.ibar_mean[t]) for t in range(args.steps + 1)])
        write_table(args.out / "variance_vs_n", ("n", "final_mean", "final_std"), rows)


if __name__ == "__main__":
    main()
