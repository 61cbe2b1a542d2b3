#!/usr/bin/env python3
"""Experiment: how triad z-scores react to the choice of switching null.

Generates two synthetic layers — one reciprocity-rich, one without any
reciprocity boost — and prints the 13 triad z-scores of each against both
the degree-preserving null and the reciprocity-preserving null. On the
boosted layer, classes containing mutual dyads are strongly over-expressed
against the degree null and collapse once the null preserves each node's
mutual-link count; the unboosted layer stays near zero under both.
"""

import argparse
import sys

from ibnet.graphs import project_binary, strip_self_loops
from ibnet.metrics import TRIAD_HAS_MUTUAL, TRIAD_LABELS
from ibnet.nullmodels import motif_zscores
from ibnet.synth import LayerConfig, SynthConfig, generate


def run(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=120)
    ap.add_argument("--density", type=float, default=0.04)
    ap.add_argument("--boost", type=float, default=0.7)
    ap.add_argument("--samples", type=int, default=500)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)

    layers = (
        LayerConfig("boosted", density=args.density, reciprocity=args.boost),
        LayerConfig("neutral", density=args.density, reciprocity=0.0),
    )
    m = generate(SynthConfig(n_nodes=args.nodes, layers=layers, overlap=0.0, seed=args.seed))

    for name, g in m.layers.items():
        binary = project_binary(strip_self_loops(g)[0])
        deg = motif_zscores(binary, "degree-switch", samples=args.samples, seed=args.seed)
        rec = motif_zscores(binary, "reciprocal-switch", samples=args.samples, seed=args.seed)
        print(f"\nlayer {name}: {binary.edge_count} links")
        print(f"{'triad':>6} {'label':>6} {'mutual':>6} {'obs':>6} {'z(degree)':>10} {'z(recip)':>10}")
        for c in range(13):
            zd = "-" if deg.z[c] is None else f"{deg.z[c]:10.2f}"
            zr = "-" if rec.z[c] is None else f"{rec.z[c]:10.2f}"
            flag = "yes" if TRIAD_HAS_MUTUAL[c] else ""
            print(f"{c + 1:>6} {TRIAD_LABELS[c]:>6} {flag:>6} {deg.observed[c]:>6} {zd:>10} {zr:>10}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
