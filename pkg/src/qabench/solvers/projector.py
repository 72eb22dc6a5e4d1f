"""Zero-temperature projector Monte Carlo for the transverse-field Ising model.

The walker population samples the wave function in the sigma^z basis. One
step applies the first-order propagator ``1 - tau * H`` stochastically with

    H = H_z(s) - F(t) * sum_i sigma^x_i

From basis state s the propagator has a diagonal element
``d(s) = 1 - tau * (E(s) - E_ref)`` and an element ``tau * F`` to each
single-flip neighbour. A walker keeps its state with probability
``d / (d + n tau F)``, otherwise flips a uniformly chosen spin, and its
weight is multiplied by ``d + n tau F``. The transverse term is written with
a minus sign; the sign-reversed driver is unitarily equivalent (conjugation
by sigma^z on every site) and keeps every propagator element non-negative.

``E_ref`` is the lower bound ``offset - (sum|h| + sum|J|)``, so ``d`` lies in
``[1 - 2 tau B, 1]``; tau is validated against that at start.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..instances import IsingInstance, energies
from .result import SolveResult


class WeightCollapse(RuntimeError):
    pass


@dataclass(frozen=True)
class ProjectorParams:
    """``tau=None`` resolves to ``0.25 / B`` and ``F_start=None`` to
    ``max|coef|``, with ``B = sum|h| + sum|J|``."""

    walkers: int = 256
    tau: float | None = None
    F_start: float | None = None
    F_end: float = 0.0
    steps: int = 2000
    seed: int | None = 0
    resample_threshold: float = 0.5

    def resolve(self, inst: IsingInstance) -> "ProjectorParams":
        B = inst.energy_bound() or 1.0
        tau = self.tau if self.tau is not None else 0.25 / B
        F0 = self.F_start if self.F_start is not None else (inst.coupling_scale() or 1.0)
        if tau <= 0 or self.walkers < 1:
            raise ValueError("need tau > 0 and walkers >= 1")
        if 2.0 * tau * B >= 1.0:
            raise ValueError(f"tau={tau:g} too large: 1 - tau*(E - E_ref) must stay positive "
                             f"(need tau < {1 / (2 * B):g})")
        return ProjectorParams(self.walkers, tau, F0, self.F_end, self.steps, self.seed,
                               self.resample_threshold)


def systematic_resample(weights: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    W = len(weights)
    cdf = np.cumsum(weights)
    cdf[-1] = 1.0
    u = (rng.random() + np.arange(W)) / W
    return np.searchsorted(cdf, u, side="left")


def projector_sqa(inst: IsingInstance, params: ProjectorParams | None = None) -> SolveResult:
    """Anneal ``F`` linearly from ``F_start`` to ``F_end`` and return the
    lowest-energy basis state seen by any walker."""
    p = (params or ProjectorParams()).resolve(inst)
    n, W = inst.n, p.walkers
    rng = np.random.default_rng(p.seed)
    B = inst.energy_bound()
    E_ref = inst.offset - B
    S = rng.choice(np.array([-1.0, 1.0]), size=(W, n))
    field = S @ inst.J_matrix + inst.h
    E = energies(inst, S)
    logw = np.zeros(W)
    best_i = int(np.argmin(E))
    best_E, best_s = float(E[best_i]), S[best_i].copy()
    trace = [best_E]
    Fs = np.linspace(p.F_start, p.F_end, p.steps) if p.steps > 1 else np.array([p.F_end])
    rows = np.arange(W)
    nbrs = inst.neighbors
    for step, F in enumerate(Fs):
        d = 1.0 - p.tau * (E - E_ref)
        flip_mass = n * p.tau * F
        total = d + flip_mass
        logw += np.log(total)
        if n and flip_mass > 0:
            flips = rng.random(W) * total >= d
            if flips.any():
                w_idx = rows[flips]
                sites = rng.integers(0, n, size=len(w_idx))
                s_old = S[w_idx, sites]
                E[w_idx] -= 2.0 * s_old * field[w_idx, sites]
                S[w_idx, sites] = -s_old
                # group by site so neighbour updates stay vectorized
                for site in np.unique(sites):
                    sel = w_idx[sites == site]
                    idx, vals = nbrs[site]
                    if len(idx):
                        field[np.ix_(sel, idx)] += (2.0 * S[sel, site])[:, None] * vals[None, :]
        i = int(np.argmin(E))
        if E[i] < best_E:
            best_E, best_s = float(E[i]), S[i].copy()
        trace.append(best_E)

        logw -= logw.max()
        w = np.exp(logw)
        total_w = w.sum()
        if not np.isfinite(total_w) or total_w <= 0:
            raise WeightCollapse(f"all walker weights vanished at step {step} (F={F:g}, "
                                 f"E range [{E.min():g}, {E.max():g}])")
        w /= total_w
        ess = 1.0 / np.sum(w * w)
        if ess < p.resample_threshold * W:
            pick = systematic_resample(w, rng)
            S, E, field = S[pick], E[pick], field[pick]
            logw = np.zeros(W)
        else:
            logw = np.log(w)
    drift = np.max(np.abs(E - energies(inst, S)), initial=0.0)
    if drift > 1e-9:
        raise RuntimeError(f"incremental energy drift {drift:g}")
    return SolveResult.build(inst, best_s, p.steps, False, "sqa", trace=trace)
