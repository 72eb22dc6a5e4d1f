"""Relative-quality histogram of simulated annealing against exact optima.

Runs Metropolis annealing on random-Ising Chimera instances, solves each
exactly with the column DP and prints q = E / E_opt binned in percent.

    python3 scripts/quality_histogram.py --k 4 --instances 50 --sweeps 200
"""

import argparse

from qabench.bench import quality_histogram
from qabench.chimera import ChimeraSpec
from qabench.instances import gen_random_ising
from qabench.solvers import AnnealSchedule, anneal_restarts, exact_chimera_dp


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--instances", type=int, default=50)
    ap.add_argument("--sweeps", type=int, default=200)
    ap.add_argument("--restarts", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    spec = ChimeraSpec.square(args.k)
    best_pairs, restart_pairs = [], []
    for i in range(args.instances):
        inst = gen_random_ising(spec, args.seed + i)
        opt = exact_chimera_dp(inst, spec).best_energy
        E, _, _ = anneal_restarts(inst, AnnealSchedule(args.sweeps, restarts=args.restarts, seed=i))
        best_pairs.append((float(E.min()), opt))
        restart_pairs += [(float(e), opt) for e in E]
    for title, pairs in (("best of restarts", best_pairs), ("single restarts", restart_pairs)):
        print(f"{title} ({len(pairs)} runs)")
        for edge, count in sorted(quality_histogram(pairs).items(), reverse=True):
            print(f"  {edge:6.1f}%  {count:6d}  {'#' * max(1, 60 * count // len(pairs))}")


if __name__ == "__main__":
    main()
