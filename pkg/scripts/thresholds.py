"""Stability verdicts on the synthetic graphs plus the 2-node counter-example.

    python3 scripts/thresholds.py [--n 2000] [--seed 2012]
"""

import argparse

import numpy as np

from pushpull import EpidemicParams, Graph, analyze, generate, integrate
from pushpull.analysis import scalar_comparison_trajectory

CASES = [
    ("push-only die-out", EpidemicParams(0.0, 0.4, 0.01)),
    ("stable push/pull", EpidemicParams(0.4, 0.6, 0.004)),
    ("monitoring params", EpidemicParams(0.4, 0.4, 0.001)),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=2012)
    args = ap.parse_args()

    graphs = {
        "regular": generate("regular", args.n, 6, args.seed),
        "erdos_renyi": generate("erdos_renyi", args.n, 3 * args.n + 1, args.seed),
        "pref_attach": generate("preferential_attachment", args.n, 3, args.seed),
    }
    print(f"{'graph':<12} {'case':<18} {'lambda1':>8} {'m':>4} {'succinct':>13} {'general':>13} {'die-out':>13}")
    for gname, g in graphs.items():
        for cname, p in CASES:
            r = analyze(g, p)
            print(f"{gname:<12} {cname:<18} {r.lambda1:8.4f} {r.max_degree:4d} {r.succinct_verdict:>13} "
                  f"{r.general_verdict:>13} {str(r.dieout_verdict):>13}")

    # the conditions are sufficient only: every checker is inconclusive here, yet the infection dies out
    g = Graph.from_arcs(2, [0], [1])
    p = EpidemicParams(0.0, 0.4, 0.4)
    r = analyze(g, p)
    tr = integrate(g, p, np.ones(2), 10_000)
    x = scalar_comparison_trajectory(0.4, 1.0, 10_000).values
    print(f"\n2-node: lambda1={r.lambda1} beta/gamma={p.beta / p.gamma} verdicts="
          f"{r.succinct_verdict}/{r.general_verdict}/{r.dieout_verdict}")
    for t in (0, 10, 100, 1000, 10_000):
        print(f"  t={t:>6}  ibar={tr.ibar[t]:.6g}  x(t)={x[t]:.6g}")


if __name__ == "__main__":
    main()
