"""Classical spin-vector dynamics under a decaying transverse field.

Each spin is a unit 3-vector m_i = (x_i, y_i, z_i) with energy

    E = sum_ij J_ij z_i z_j + sum_i h_i z_i + F(t) sum_i x_i

``steepest`` takes normalised gradient steps (no inertia) and runs 10x the
step count; ``momentum`` integrates a damped velocity. The final z-signs are
the decoded configuration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..instances import IsingInstance, energies
from .anneal import restart_rngs
from .result import SolveResult

MODES = ("steepest", "momentum")


@dataclass(frozen=True)
class SpinDynamicsParams:
    steps: int = 1000
    step_size: float = 1e-2
    F_start: float | None = None  # None -> 2 * max|coef|
    F_end: float = 0.0
    damping: float = 0.1
    noise: float = 0.05
    restarts: int = 1
    seed: int | None = 0


def _normalize(M: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(M, axis=-1, keepdims=True)
    return M / np.where(norm > 0, norm, 1.0)


def spin_dynamics(inst: IsingInstance, mode: str = "steepest",
                  params: SpinDynamicsParams | None = None) -> SolveResult:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    p = params or SpinDynamicsParams()
    n, R = inst.n, p.restarts
    F0 = p.F_start if p.F_start is not None else 2.0 * (inst.coupling_scale() or 1.0)
    steps = p.steps * (10 if mode == "steepest" else 1)
    rngs = restart_rngs(p.seed, R)
    # start aligned with the field (-x for F > 0), slightly perturbed
    M = np.stack([np.column_stack([-np.ones(n), np.zeros(n), np.zeros(n)])
                  + p.noise * g.standard_normal((n, 3)) for g in rngs])
    M = _normalize(M)
    V = np.zeros_like(M)
    Jm = inst.J_matrix
    fields = np.linspace(F0, p.F_end, steps) if steps > 1 else np.array([p.F_end])

    def rounded(M):
        return np.where(M[..., 2] >= 0, 1.0, -1.0)

    S = rounded(M)
    E = energies(inst, S)
    best_E, best_S = E.copy(), S.copy()
    trace = [float(best_E.min())]
    for F in fields:
        Z = M[..., 2]
        force = np.zeros_like(M)
        force[..., 2] = -(Z @ Jm + inst.h)
        force[..., 0] = -F
        if mode == "steepest":
            M = _normalize(M + p.step_size * force)
        else:
            V = (1.0 - p.damping) * V + p.step_size * force
            M = _normalize(M + V)
            # drop the radial part so velocity stays tangent to the sphere
            V -= np.sum(V * M, axis=-1, keepdims=True) * M
        S = rounded(M)
        E = energies(inst, S)
        better = E < best_E
        best_E[better] = E[better]
        best_S[better] = S[better]
        trace.append(float(best_E.min()))
    r = int(np.argmin(best_E))
    return SolveResult.build(inst, best_S[r], steps * R, False, f"spin-{mode}", trace=trace)
