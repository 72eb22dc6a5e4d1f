"""Compare annealing success on random Ising and random QUBO couplers.

Both families use coefficients in {-1, +1} on the Chimera edges. The QUBO
family is converted with s = 1 - 2x, which adds local fields and shrinks the
couplers to 1/4, so the two landscapes differ in their field structure.

    python3 scripts/qubo_vs_ising.py --sizes 1 2 3 --instances 20
"""

import argparse

from qabench.bench import run_campaign


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--instances", type=int, default=20)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--sweeps", type=int, default=50)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    print("family  n     mean_p_hat  mean_tts99_us")
    for family in ("ising", "qubo"):
        cfg = {"family": family, "sizes": args.sizes, "instances": args.instances,
               "trials": args.trials, "seed": 1,
               "solvers": [{"id": "sa", "params": {"sweeps": args.sweeps}}]}
        for a in run_campaign(cfg, jobs=args.jobs).aggregates:
            print(f"{family:<7} {a.n:<5} {a.mean_p_hat:<11.3f} {a.mean_tts99_us:.4g}")


if __name__ == "__main__":
    main()
