"""Panel size against estimation error for 2avg-x panels, median over several MC seeds.

    python3 scripts/monitoring.py [--seeds 20] [--runs 100] [--graph er|pa] [--out results/]
"""

import argparse
from pathlib import Path

import numpy as np

from pushpull import EpidemicParams, degree_statistics, generate, monte_carlo
from pushpull.monitoring import (global_series, panel_estimate, running_estimate, select_panel,
                                 window_mean)
from pushpull.outputs import write_table

SIZES = [2, 4, 8, 16, 32, 64, 128, 256]


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--graph", choices=("er", "pa"), default="er")
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--runs", type=int, default=100)
    ap.add_argument("--steps", type=int, default=200)
    ap.add_argument("--seed", type=int, default=2012)
    ap.add_argument("--out", type=Path, default=None)
    args = ap.parse_args()
    p = EpidemicParams(0.4, 0.4, 0.001)
    t0, t1 = 10, args.steps - 10

    if args.graph == "er":
        g = generate("erdos_renyi", 2000, 6001, args.seed)
    else:
        g = generate("preferential_attachment", 2000, 3, args.seed)
    stats = degree_statistics(g)
    print(f"k_hat={stats.k_hat} class size={stats.class_size_at_avg} target 2deg={stats.mean_2deg_at_avg:.2f}")
    panels = {x: select_panel(g, x, stats) for x in SIZES}

    errors = {x: [] for x in SIZES}
    first = None
    for s in range(1, args.seeds + 1):
        series = monte_carlo(g, p, 0.2, args.steps, args.runs, s).node_freq
        first = series if first is None else first
        target = window_mean(global_series(series), t0, t1)
        for x, pan in panels.items():
            errors[x].append(abs(panel_estimate(series, pan, t0, t1).value - target))
    sweep = [(x, panels[x].size, float(np.median(errors[x]))) for x in SIZES]
    for x, size, e in sweep:
        print(f"  x={x:<4} size={size:<4} median |error|={e:.5f}")

    ibar = global_series(first)
    running = running_estimate(first, panels[32], t0)
    late = max(abs(e.value - ibar[e.t1]) for e in running if e.t1 >= 120)
    print(f"running 2avg-32 estimate, max gap for t >= 120: {late:.5f}")

    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        write_table(args.out / f"panel_sweep_{args.graph}", ("x", "size", "median_abs_error"), sweep)
        write_table(args.out / f"running_{args.graph}", ("t", "i_bar", "estimate"),
                    [(e.t1, ibar[e.t1], e.value) for e in running])


if __name__ == "__main__":
    main()
