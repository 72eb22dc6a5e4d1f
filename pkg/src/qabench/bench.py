"""Benchmark methodology: success criteria, time-to-solution, gauge-pooled
campaigns, quality histograms and scaling fits.

A campaign config is JSON::

    {"family": "ising", "sizes": [1, 2, 3], "instances": 10,
     "solvers": [{"id": "sa", "params": {"sweeps": 200}}],
     "trials": 100, "gauges": 4, "criterion": "optimal", "seed": 1,
     "t_trial_us": 20}

Sizes are Chimera side lengths k (n = 8k^2). ``criterion`` is ``"optimal"``
or ``{"within": eps}``. Every random draw comes from a ``SeedSequence``
keyed by (seed, size, instance, gauge, trial), so outputs do not depend on
how work is split across processes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .chimera import ChimeraSpec
from .instances import (IsingInstance, apply_gauge, chimera_spec_of, gen_mais, gen_mis, gen_planted,
                        gen_random_ising, gen_random_qubo, qubo_to_ising, random_gauge)
from .solvers import (ORACLE_LIMIT, AnnealSchedule, FrontierTooLarge, ProjectorParams,
                      SpinDynamicsParams, anneal_restarts, brute_force, exact_chimera_dp,
                      projector_sqa, spin_dynamics)

ENERGY_TOL = 1e-9
DEFAULT_T_TRIAL_US = 20.0

CSV_HEADER = ["family", "n", "instance", "solver", "gauge_pool", "trials", "successes",
              "p_hat", "tts99_us", "tts_mean_us", "best_energy", "opt_energy", "excluded"]
AGG_HEADER = ["family", "n", "solver", "instances", "excluded", "mean_p_hat",
              "mean_tts99_us", "se_tts99_us", "mean_tts_mean_us", "se_tts_mean_us"]


# --- criteria and formulas -----------------------------------------------------

@dataclass(frozen=True)
class SuccessCriterion:
    kind: str = "optimal"
    eps: float | None = None

    def __post_init__(self):
        if self.kind not in ("optimal", "within"):
            raise ValueError(f"unknown criterion kind {self.kind!r}")
        if self.kind == "within" and not (self.eps is not None and 0.0 < self.eps < 1.0):
            raise ValueError("WithinFraction needs eps in (0, 1)")

    @classmethod
    def optimal(cls) -> "SuccessCriterion":
        return cls("optimal")

    @classmethod
    def within(cls, eps: float) -> "SuccessCriterion":
        return cls("within", eps)

    @classmethod
    def parse(cls, spec) -> "SuccessCriterion":
        if spec in (None, "optimal"):
            return cls.optimal()
        if isinstance(spec, dict) and "within" in spec:
            return cls.within(float(spec["within"]))
        raise ValueError(f"bad criterion {spec!r}")

    def to_json(self):
        return "optimal" if self.kind == "optimal" else {"within": self.eps}


def relative_quality(achieved: float, optimal: float) -> float:
    """``achieved / optimal`` for negative optima (1 at the optimum)."""
    if optimal > 0:
        raise ValueError("unsupported sign regime: optimal energy is positive")
    if optimal == 0:
        return 1.0 if abs(achieved) <= ENERGY_TOL else 0.0
    return achieved / optimal


def judge(criterion: SuccessCriterion, achieved: float, optimal: float) -> bool:
    if criterion.kind == "optimal":
        return abs(achieved - optimal) <= ENERGY_TOL
    return relative_quality(achieved, optimal) >= 1.0 - criterion.eps - ENERGY_TOL


def repeats_99(p: float) -> int:
    """``ceil(log 0.01 / log(1 - p))`` with exact ratios kept exact."""
    if not 0.0 < p <= 1.0:
        raise ValueError("p must be in (0, 1]")
    if p == 1.0:
        return 1
    x = math.log(0.01) / math.log1p(-p)
    r = round(x)
    return max(1, r if abs(x - r) < 1e-9 else math.ceil(x))


def tts(p_hat: float, t_trial: float = DEFAULT_T_TRIAL_US) -> tuple[float, float]:
    """(99%-confidence time, mean time) to first success.

    ``p_hat = 0`` gives ``(inf, inf)``; such records are flagged excluded.
    """
    if not 0.0 <= p_hat <= 1.0:
        raise ValueError("p_hat must be in [0, 1]")
    if p_hat == 0.0:
        return math.inf, math.inf
    return float(t_trial * repeats_99(p_hat)), t_trial / p_hat


def quality_histogram(pairs: Sequence[tuple[float, float]], bin_width: float = 1.0) -> dict[float, int]:
    """Counts per quality bin, keyed by the bin's lower edge in percent."""
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    hist: dict[float, int] = {}
    for achieved, optimal in pairs:
        if optimal >= 0:
            raise ValueError("unsupported sign regime: histogram needs negative optima")
        q = relative_quality(achieved, optimal)
        b = math.floor(q * 100.0 / bin_width + 1e-9) * bin_width
        b = round(b, 9)
        hist[b] = hist.get(b, 0) + 1
    return dict(sorted(hist.items()))


_TRANSFORMS = {
    "sqrt_n": np.sqrt,
    "n": lambda x: x,
    "log_n": np.log10,
}


@dataclass(frozen=True)
class ScalingFit:
    x_transform: str
    slope: float
    intercept: float
    r_squared: float

    def predict(self, n) -> np.ndarray:
        return 10.0 ** (self.intercept + self.slope * _TRANSFORMS[self.x_transform](np.asarray(n, float)))


def fit_scaling(points: Sequence[tuple[float, float]], x_transform: str = "sqrt_n") -> ScalingFit:
    """Least squares of log10(tts) against transform(n)."""
    if x_transform not in _TRANSFORMS:
        raise ValueError(f"unknown transform {x_transform!r}")
    if len(points) < 3:
        raise ValueError("need at least 3 points")
    n = np.array([p[0] for p in points], float)
    t = np.array([p[1] for p in points], float)
    if np.any(t <= 0) or np.any(n <= 0):
        raise ValueError("sizes and times must be positive")
    x = _TRANSFORMS[x_transform](n)
    y = np.log10(t)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(resid ** 2))
    r2 = 1.0 if ss_tot <= 1e-24 else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    if ss_tot <= 1e-24:
        slope, intercept = 0.0, float(y.mean())
    return ScalingFit(x_transform, float(slope), float(intercept), r2)


# --- campaigns -----------------------------------------------------------------

FAMILIES = ("ising", "qubo", "mis", "mais", "planted")
SOLVERS = ("brute", "dp", "sa", "spin", "sqa")


@dataclass(frozen=True)
class SolverSpec:
    id: str
    params: dict = field(default_factory=dict)
    label: str | None = None

    @property
    def name(self) -> str:
        return self.label or self.id


@dataclass(frozen=True)
class CampaignConfig:
    family: str
    sizes: tuple[int, ...]
    solvers: tuple[SolverSpec, ...]
    instances: int = 10
    trials: int = 100
    gauges: int = 1
    criterion: SuccessCriterion = SuccessCriterion()
    seed: int = 0
    t_trial_us: float = DEFAULT_T_TRIAL_US
    family_params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        for s in self.solvers:
            if s.id not in SOLVERS:
                raise ValueError(f"unknown solver {s.id!r}; choose from {SOLVERS}")
        if min(self.instances, self.trials, self.gauges) < 1 or not self.sizes:
            raise ValueError("need sizes and instances, trials, gauges >= 1")

    @classmethod
    def from_dict(cls, d: dict) -> "CampaignConfig":
        known = {"family", "sizes", "solvers", "instances", "trials", "gauges", "criterion",
                 "seed", "t_trial_us", "family_params"}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown config keys {sorted(extra)}")
        solvers = tuple(SolverSpec(s["id"], dict(s.get("params", {})), s.get("label"))
                        for s in d["solvers"])
        return cls(d["family"], tuple(int(k) for k in d["sizes"]), solvers,
                   int(d.get("instances", 10)), int(d.get("trials", 100)),
                   int(d.get("gauges", 1)), SuccessCriterion.parse(d.get("criterion")),
                   int(d.get("seed", 0)), float(d.get("t_trial_us", DEFAULT_T_TRIAL_US)),
                   dict(d.get("family_params", {})))

    def to_dict(self) -> dict:
        return {
            "family": self.family, "sizes": list(self.sizes),
            "solvers": [{"id": s.id, "params": s.params, **({"label": s.label} if s.label else {})}
                        for s in self.solvers],
            "instances": self.instances, "trials": self.trials, "gauges": self.gauges,
            "criterion": self.criterion.to_json(), "seed": self.seed,
            "t_trial_us": self.t_trial_us, "family_params": self.family_params,
        }


@dataclass
class BenchRecord:
    family: str
    n: int
    instance: int
    solver: str
    gauge_pool: int
    trials: int
    successes: int
    p_hat: float
    tts99_us: float
    tts_mean_us: float
    best_energy: float
    opt_energy: float | None
    excluded: bool
    criterion: str = "optimal"

    def __post_init__(self):
        if not 0 <= self.successes <= self.trials:
            raise ValueError("successes must lie in [0, trials]")

    def row(self) -> list[str]:
        def num(x):
            if x is None:
                return ""
            return "inf" if math.isinf(x) else repr(float(x))
        return [self.family, str(self.n), str(self.instance), self.solver, str(self.gauge_pool),
                str(self.trials), str(self.successes), num(self.p_hat), num(self.tts99_us),
                num(self.tts_mean_us), num(self.best_energy), num(self.opt_energy),
                str(int(self.excluded))]


def _seed_int(master: int, *key: int) -> int:
    return int(np.random.SeedSequence(master, spawn_key=key).generate_state(1, np.uint32)[0])


# stream tags, so instance/gauge/trial keys never collide
_INSTANCE, _GAUGE, _TRIAL = 0, 1, 2


def make_instance(cfg: CampaignConfig, k: int, i: int) -> IsingInstance:
    spec = ChimeraSpec.square(k)
    seed = _seed_int(cfg.seed, _INSTANCE, k, i)
    fp = cfg.family_params
    if cfg.family == "ising":
        return gen_random_ising(spec, seed)
    if cfg.family == "qubo":
        return qubo_to_ising(gen_random_qubo(spec, seed))
    if cfg.family == "mis":
        return gen_mis(spec, seed)
    if cfg.family == "mais":
        return gen_mais(spec, seed)
    return gen_planted(spec, float(fp.get("C", 0.2)), fp.get("loop_policy", "any"), seed)


def reference_optimum(inst: IsingInstance, spec: ChimeraSpec) -> float | None:
    """Planted record, then Chimera DP, then brute force; None if none applies."""
    if inst.planted_energy is not None:
        return inst.planted_energy
    try:
        return exact_chimera_dp(inst, spec).best_energy
    except FrontierTooLarge:
        pass
    if inst.n <= ORACLE_LIMIT:
        return brute_force(inst).best_energy
    return None


def run_trials(inst: IsingInstance, solver: SolverSpec, trials: int, master: int,
               key: tuple) -> np.ndarray:
    """Best energy of each trial; trial t draws from stream (master, *key, t)."""
    p = solver.params
    if solver.id == "brute":
        return np.full(trials, brute_force(inst).best_energy)
    if solver.id == "dp":
        spec = chimera_spec_of(inst)
        if spec is None:
            raise ValueError("dp solver needs a Chimera-topology instance")
        return np.full(trials, exact_chimera_dp(inst, spec).best_energy)
    if solver.id == "sa":
        sched = AnnealSchedule(sweeps=int(p.get("sweeps", 200)), T_start=p.get("T_start"),
                               T_end=p.get("T_end", 0.05), restarts=trials, seed=master,
                               stream_key=(_TRIAL, *key))
        best_E, _, _ = anneal_restarts(inst, sched)
        return best_E
    out = np.empty(trials)
    for t in range(trials):
        seed = _seed_int(master, _TRIAL, *key, t)
        if solver.id == "spin":
            params = {k: v for k, v in p.items() if k != "mode"}
            res = spin_dynamics(inst, p.get("mode", "steepest"),
                                SpinDynamicsParams(**{**params, "seed": seed}))
        else:
            res = projector_sqa(inst, ProjectorParams(**{**p, "seed": seed}))
        out[t] = res.best_energy
    return out


def _instance_task(args) -> list[BenchRecord]:
    cfg, k, i = args
    spec = ChimeraSpec.square(k)
    base = make_instance(cfg, k, i)
    opt = reference_optimum(base, spec)
    records = []
    for si, solver in enumerate(cfg.solvers):
        successes, total, best = 0, 0, math.inf
        for gi in range(cfg.gauges):
            g = random_gauge(base.n, _seed_int(cfg.seed, _GAUGE, k, i, gi))
            E = run_trials(apply_gauge(base, g), solver, cfg.trials, cfg.seed, (k, i, gi))
            best = min(best, float(E.min()))
            total += len(E)
            if opt is not None:
                successes += sum(judge(cfg.criterion, float(e), opt) for e in E)
        if opt is None:
            records.append(BenchRecord(cfg.family, base.n, i, solver.name, cfg.gauges, total, 0,
                                       0.0, math.inf, math.inf, best, None, True,
                                       "unknown-optimum"))
            continue
        p_hat = successes / total
        t99, tmean = tts(p_hat, cfg.t_trial_us)
        records.append(BenchRecord(cfg.family, base.n, i, solver.name, cfg.gauges, total,
                                   successes, p_hat, t99, tmean, best, opt, p_hat == 0.0,
                                   json.dumps(cfg.criterion.to_json())))
    return records


@dataclass
class AggregateRow:
    family: str
    n: int
    solver: str
    instances: int
    excluded: int
    mean_p_hat: float
    mean_tts99_us: float
    se_tts99_us: float
    mean_tts_mean_us: float
    se_tts_mean_us: float


def _mean_se(x: list[float]) -> tuple[float, float]:
    if not x:
        return math.nan, math.nan
    a = np.array(x)
    se = float(a.std(ddof=1) / math.sqrt(len(a))) if len(a) > 1 else 0.0
    return float(a.mean()), se


def aggregate(records: Sequence[BenchRecord]) -> list[AggregateRow]:
    """Per (n, solver) mean and standard error over non-excluded instances."""
    groups: dict[tuple, list[BenchRecord]] = {}
    for r in records:
        groups.setdefault((r.n, r.solver), []).append(r)
    rows = []
    solver_order = list(dict.fromkeys(r.solver for r in records))
    for (n, solver), rs in sorted(groups.items(), key=lambda kv: (kv[0][0], solver_order.index(kv[0][1]))):
        kept = [r for r in rs if not r.excluded]
        m99, se99 = _mean_se([r.tts99_us for r in kept])
        mm, sem = _mean_se([r.tts_mean_us for r in kept])
        mp = float(np.mean([r.p_hat for r in rs]))
        rows.append(AggregateRow(rs[0].family, n, solver, len(rs), len(rs) - len(kept), mp,
                                 m99, se99, mm, sem))
    return rows


@dataclass
class CampaignResult:
    config: CampaignConfig
    records: list[BenchRecord]
    aggregates: list[AggregateRow]

    def records_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.records:
            w.writerow(r.row())
        return buf.getvalue()

    def aggregate_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(AGG_HEADER)
        for a in self.aggregates:
            d = asdict(a)
            w.writerow([d[h] if isinstance(d[h], (str, int)) else repr(float(d[h]))
                        for h in AGG_HEADER])
        return buf.getvalue()

    def plot_tsv(self, x_transform: str = "sqrt_n") -> str:
        f = _TRANSFORMS[x_transform]
        lines = [f"solver\t{x_transform}\tlog10_tts99_us"]
        for a in self.aggregates:
            if a.mean_tts99_us > 0 and math.isfinite(a.mean_tts99_us):
                lines.append(f"{a.solver}\t{float(f(a.n))!r}\t{math.log10(a.mean_tts99_us)!r}")
        return "\n".join(lines) + "\n"

    def write(self, out_dir: str | Path) -> None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "records.csv").write_text(self.records_csv())
        (out / "aggregate.csv").write_text(self.aggregate_csv())
        (out / "scaling.tsv").write_text(self.plot_tsv())
        (out / "config.json").write_text(json.dumps(self.config.to_dict(), indent=2) + "\n")


def run_campaign(config: CampaignConfig | dict, jobs: int = 1) -> CampaignResult:
    """Run every (size, instance) task, in parallel if ``jobs > 1``.

    Results are collected in (size, instance) order, so the tables are the
    same for any ``jobs``.
    """
    cfg = config if isinstance(config, CampaignConfig) else CampaignConfig.from_dict(config)
    tasks = [(cfg, k, i) for k in cfg.sizes for i in range(cfg.instances)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = list(ex.map(_instance_task, tasks))
    else:
        chunks = [_instance_task(t) for t in tasks]
    records = [r for chunk in chunks for r in chunk]
    return CampaignResult(cfg, records, aggregate(records))


def load_config(path: str | Path) -> CampaignConfig:
    return CampaignConfig.from_dict(json.loads(Path(path).read_text()))
