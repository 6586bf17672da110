"""Global mean-field rate against the mean equilibrium while sweeping alpha, beta or gamma.

    python3 scripts/meanfield_sweeps.py [--out results/]
"""

import argparse
from pathlib import Path

import numpy as np

from pushpull import EpidemicParams, degree_statistics, find_equilibrium, generate
from pushpull.meanfield import solve_global_rate
from pushpull.outputs import write_table

BASE = {"alpha": 0.4, "beta": 0.4, "gamma": 0.004}
SWEEPS = {
    "alpha": [round(0.1 * k, 1) for k in range(1, 10)],
    "beta": [round(0.1 * k, 1) for k in range(1, 10)],
    "gamma": [0.001, 0.002, 0.004, 0.008, 0.016, 0.032],
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--seed", type=int, default=2012)
    ap.add_argument("--out", type=Path, default=None)
    args = ap.parse_args()
    g = generate("erdos_renyi", 2000, 6001, args.seed)
    avg_k = degree_statistics(g).avg_degree

    for name, values in SWEEPS.items():
        rows = []
        for v in values:
            p = EpidemicParams(**{**BASE, name: v})
            mf = solve_global_rate(avg_k, p).ibar
            eq = find_equilibrium(g, p)
            rows.append((v, p.gamma * avg_k, mf, eq.mean))
        mf = np.array([r[2] for r in rows])
        print(f"\n{name} sweep (base {BASE})")
        for v, gk, a, b in rows:
            print(f"  {name}={v:<6} gamma<k>={gk:.3f}  meanfield={a:.5f}  equilibrium={b:.5f}  err={abs(a - b):.5f}")
        print(f"  first differences {np.round(np.diff(mf), 5)}")
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            write_table(args.out / f"sweep_{name}", ("value", "gamma_k", "ibar_meanfield", "ibar_equilibrium"), rows)


if __name__ == "__main__":
    main()
