from .anneal import AnnealSchedule, anneal_restarts, metropolis_anneal, restart_rngs
from .brute import ORACLE_LIMIT, brute_force, energy_spectrum
from .chimera_dp import FrontierTooLarge, exact_chimera_dp
from .dynamics import SpinDynamicsParams, spin_dynamics
from .projector import ProjectorParams, WeightCollapse, projector_sqa
from .result import SolveResult

__all__ = [
    "AnnealSchedule", "FrontierTooLarge", "ORACLE_LIMIT", "ProjectorParams", "SolveResult",
    "SpinDynamicsParams", "WeightCollapse", "anneal_restarts", "brute_force", "energy_spectrum",
    "exact_chimera_dp", "metropolis_anneal", "projector_sqa", "restart_rngs", "spin_dynamics",
]
