"""Time-to-solution scaling campaign with exponential and power-law fits.

Runs a bench campaign (a JSON config, or a built-in SA-vs-SQA ladder on
planted instances) and fits log10(TTS99) against sqrt(n) and log10(n).

    python3 scripts/tts_scaling.py --out runs/tts --jobs 4
    python3 scripts/tts_scaling.py --config my_campaign.json --out runs/mine
"""

import argparse

from qabench.bench import fit_scaling, load_config, run_campaign, CampaignConfig

DEFAULT = {
    "family": "planted", "sizes": [1, 2, 3, 4], "instances": 10, "trials": 40, "gauges": 2,
    "seed": 7, "family_params": {"C": 0.3},
    "solvers": [{"id": "sa", "params": {"sweeps": 20}},
                {"id": "sqa", "params": {"walkers": 32, "steps": 100}}],
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config")
    ap.add_argument("--out", default="runs/tts_scaling")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    cfg = load_config(args.config) if args.config else CampaignConfig.from_dict(DEFAULT)
    res = run_campaign(cfg, jobs=args.jobs)
    res.write(args.out)
    print(res.aggregate_csv())
    for solver in dict.fromkeys(a.solver for a in res.aggregates):
        pts = [(a.n, a.mean_tts99_us) for a in res.aggregates
               if a.solver == solver and a.excluded < a.instances]
        if len(pts) < 3:
            print(f"{solver}: fewer than 3 usable sizes, no fit")
            continue
        for tr in ("sqrt_n", "log_n"):
            f = fit_scaling(pts, tr)
            print(f"{solver:>6} {tr:<7} slope={f.slope:.4f} intercept={f.intercept:.3f} "
                  f"R2={f.r_squared:.3f}")
    print(f"tables in {args.out}/")


if __name__ == "__main__":
    main()
