"""Grid search of the Chimera-minor generator probabilities.

Scores each (p1, p2, p3) setting on an 8x8 host over a handful of seeds and
prints mean utilization, mean clustering and the fraction of seeds whose
clustering lies in the target band. The package defaults were picked from
this table.

    python3 scripts/calibrate_minor.py --seeds 10
"""

import argparse
import itertools

import numpy as np

from qabench.chimera import ChimeraSpec
from qabench.graph import clustering_coefficient
from qabench.synthnet import MinorGenParams, generate_chimera_minor, utilization


def score(spec, p1, p2, p3, seeds):
    util, clus = [], []
    for s in range(seeds):
        g, emb = generate_chimera_minor(spec, MinorGenParams(p1, p2, 2, p3, seed=s))
        util.append(utilization(emb, spec))
        clus.append(clustering_coefficient(g))
    clus = np.array(clus)
    return np.mean(util), clus.mean(), np.mean((clus >= 0.05) & (clus <= 0.2))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, default=8)
    ap.add_argument("--seeds", type=int, default=10)
    args = ap.parse_args()
    spec = ChimeraSpec.square(args.k)
    print("p1    p2    p3    util   clust  in_band")
    for p1, p2, p3 in itertools.product((0.3, 0.4, 0.5), (0.05, 0.1, 0.15), (0.2, 0.3, 0.4)):
        u, c, band = score(spec, p1, p2, p3, args.seeds)
        flag = " *" if u >= 0.55 and band >= 0.8 else ""
        print(f"{p1:<5} {p2:<5} {p3:<5} {u:.3f}  {c:.3f}  {band:.2f}{flag}")


if __name__ == "__main__":
    main()
