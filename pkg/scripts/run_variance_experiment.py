#!/usr/bin/env python3
"""Monte-Carlo coefficient-variance experiment for one graph.

Draws random bond lengths, averages |a_l(k)|^2 over seeded uniform k
samples, and prints the comparison against the exact fractions where a
closed form exists.

Usage: run_variance_experiment.py n a1 a2 [samples] [seed]
"""

import sys

from circulant_orbits.graph import make_graph
from circulant_orbits.quantum import (DEFAULT_SEED, MetricGraph,
                                      build_variance_report, resolve_workers)


def main(argv) -> int:
    if not 3 <= len(argv) <= 5:
        print(__doc__, file=sys.stderr)
        return 2
    n, a1, a2 = int(argv[0]), int(argv[1]), int(argv[2])
    samples = int(argv[3]) if len(argv) > 3 else 1_000_000
    seed = int(argv[4]) if len(argv) > 4 else DEFAULT_SEED
    g = make_graph(n, a1, a2)
    mg = MetricGraph.random(g, seed)
    report = build_variance_report(mg, samples, seed=seed,
                                   workers=resolve_workers())
    print(f"{g}: {samples} samples, seed {seed}")
    print(f"{'l':>3} {'formula':>12} {'estimate':>14} {'error':>14}")
    for r in report.rows:
        frac = f"{r.formula.numerator}/{r.formula.denominator}" if r.formula is not None else "-"
        err = f"{r.error:+.9f}" if r.error is not None else "-"
        print(f"{r.l:>3} {frac:>12} {r.mc_estimate:>14.9f} {err:>14}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
