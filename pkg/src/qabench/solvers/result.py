from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..instances import IsingInstance, energy


@dataclass
class SolveResult:
    best_config: np.ndarray
    best_energy: float
    steps: int
    optimality_proven: bool
    solver: str = ""
    degeneracy: int | None = None
    trace: list[float] = field(default_factory=list)

    @classmethod
    def build(cls, inst: IsingInstance, config, steps: int, proven: bool, solver: str,
              **kw) -> "SolveResult":
        """Recompute the energy from the config so the two always agree."""
        cfg = np.asarray(config, dtype=np.int8).copy()
        return cls(cfg, float(energy(inst, cfg)), int(steps), bool(proven), solver, **kw)

    def to_dict(self) -> dict:
        d = {
            "solver": self.solver,
            "best_energy": self.best_energy,
            "best_config": [int(x) for x in self.best_config],
            "steps": self.steps,
            "optimality_proven": self.optimality_proven,
        }
        if self.degeneracy is not None:
            d["degeneracy"] = self.degeneracy
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())
