"""Ising/QUBO data model, energy evaluation, variable transforms, gauges,
and the benchmark instance generators."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .chimera import ChimeraSpec, build_chimera
from .graph import Graph

FAMILIES = ("ising", "qubo", "mis", "mais", "planted", "bipartition", "custom")
LOOP_POLICIES = ("any", "short4", "long")


def _pair(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


def _clean_couplers(J: Mapping, n: int) -> dict[tuple[int, int], float]:
    out: dict[tuple[int, int], float] = {}
    for (i, j), val in J.items():
        i, j = int(i), int(j)
        if i == j:
            raise ValueError(f"coupler on a single variable ({i}, {i})")
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"coupler ({i}, {j}) out of range for n={n}")
        key = _pair(i, j)
        if key in out:
            raise ValueError(f"coupler {key} given twice")
        if val != 0:
            out[key] = float(val)
    return dict(sorted(out.items()))


@dataclass(frozen=True, eq=False)
class IsingInstance:
    """``E(s) = sum_i h_i s_i + sum_{i<j} J_ij s_i s_j + offset``.

    Zero couplers are dropped. Treated as immutable: solvers never write to
    ``h`` or ``J``.
    """

    n: int
    h: np.ndarray
    J: Mapping[tuple[int, int], float]
    offset: float = 0.0
    family: str = "custom"
    seed: int | None = None
    planted: np.ndarray | None = None
    planted_energy: float | None = None
    topology: str | None = None

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float).copy()
        if h.shape != (self.n,):
            raise ValueError(f"h has shape {h.shape}, expected ({self.n},)")
        h.setflags(write=False)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "J", _clean_couplers(self.J, self.n))
        object.__setattr__(self, "offset", float(self.offset))
        if self.planted is not None:
            p = as_spins(self.planted, self.n)
            p.setflags(write=False)
            object.__setattr__(self, "planted", p)

    @cached_property
    def J_matrix(self) -> np.ndarray:
        """Dense symmetric matrix with ``J_ij`` in both triangles, zero diagonal."""
        M = np.zeros((self.n, self.n))
        for (i, j), v in self.J.items():
            M[i, j] = M[j, i] = v
        M.setflags(write=False)
        return M

    @cached_property
    def neighbors(self) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
        nbr: list[list[int]] = [[] for _ in range(self.n)]
        val: list[list[float]] = [[] for _ in range(self.n)]
        for (i, j), v in self.J.items():
            nbr[i].append(j)
            val[i].append(v)
            nbr[j].append(i)
            val[j].append(v)
        return tuple((np.array(a, dtype=np.int64), np.array(b, dtype=float)) for a, b in zip(nbr, val))

    def coupling_scale(self) -> float:
        """Largest absolute coefficient (0 for an empty instance)."""
        vals = [abs(v) for v in self.J.values()] + [float(np.max(np.abs(self.h)))] if self.n else []
        return max(vals, default=0.0)

    def energy_bound(self) -> float:
        """``sum |h| + sum |J|``: bounds ``|E(s) - offset|`` for every s."""
        return float(np.sum(np.abs(self.h)) + sum(abs(v) for v in self.J.values()))

    def graph(self) -> Graph:
        return Graph.from_edges(self.J.keys(), self.n)

    def with_planted(self, spins, energy: float) -> "IsingInstance":
        return replace(self, planted=np.asarray(spins), planted_energy=float(energy))


@dataclass(frozen=True, eq=False)
class QuboInstance:
    """``f(x) = sum_i a_i x_i + sum_{i<j} b_ij x_i x_j + offset``, x in {0,1}^n."""

    n: int
    a: np.ndarray
    b: Mapping[tuple[int, int], float]
    offset: float = 0.0
    family: str = "qubo"
    seed: int | None = None
    topology: str | None = None

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float).copy()
        if a.shape != (self.n,):
            raise ValueError(f"a has shape {a.shape}, expected ({self.n},)")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", _clean_couplers(self.b, self.n))
        object.__setattr__(self, "offset", float(self.offset))

    def objective(self, x) -> float:
        x = np.asarray(x)
        if x.shape != (self.n,):
            raise ValueError("assignment length mismatch")
        val = float(self.a @ x) + self.offset
        for (i, j), v in self.b.items():
            val += v * x[i] * x[j]
        return val


def as_spins(s, n: int | None = None) -> np.ndarray:
    arr = np.asarray(s, dtype=np.int8)
    if arr.ndim != 1 or (n is not None and arr.shape[0] != n):
        raise ValueError(f"spin vector length mismatch (expected {n})")
    if not np.all((arr == 1) | (arr == -1)):
        raise ValueError("spins must be +1 or -1")
    return arr


def energy(inst: IsingInstance, s) -> float:
    s = np.asarray(s)
    if s.shape != (inst.n,):
        raise ValueError(f"spin vector has length {s.shape}, instance has n={inst.n}")
    e = float(inst.h @ s)
    for (i, j), v in inst.J.items():
        e += v * float(s[i]) * float(s[j])
    return float(e + inst.offset)


def energies(inst: IsingInstance, S: np.ndarray) -> np.ndarray:
    """Vectorized energies for a batch of configurations (rows of ``S``)."""
    S = np.asarray(S, dtype=float)
    return S @ inst.h + 0.5 * np.sum((S @ inst.J_matrix) * S, axis=1) + inst.offset


def qubo_to_ising(q: QuboInstance) -> IsingInstance:
    """Substitute ``x = (1 - s) / 2``."""
    h = -0.5 * q.a.copy()
    offset = q.offset + 0.5 * float(np.sum(q.a))
    J = {}
    for (i, j), v in q.b.items():
        # v (1 - s_i)(1 - s_j) / 4
        J[(i, j)] = v / 4.0
        h[i] -= v / 4.0
        h[j] -= v / 4.0
        offset += v / 4.0
    return IsingInstance(q.n, h, J, offset, family=q.family, seed=q.seed, topology=q.topology)


def ising_to_qubo(inst: IsingInstance) -> QuboInstance:
    """Substitute ``s = 1 - 2x``."""
    a = -2.0 * inst.h.copy()
    offset = inst.offset + float(np.sum(inst.h))
    b = {}
    for (i, j), v in inst.J.items():
        # v (1 - 2x_i)(1 - 2x_j)
        b[(i, j)] = 4.0 * v
        a[i] -= 2.0 * v
        a[j] -= 2.0 * v
        offset += v
    return QuboInstance(inst.n, a, b, offset, family=inst.family, seed=inst.seed,
                        topology=inst.topology)


def random_gauge(n: int, seed=None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.choice(np.array([-1, 1], dtype=np.int8), size=n)


def apply_gauge(inst: IsingInstance, g) -> IsingInstance:
    """Spin-reversal transform ``h_i -> g_i h_i``, ``J_ij -> g_i g_j J_ij``.

    A ground state ``s`` of the original maps to ``g * s`` for the gauged
    instance; the energy spectrum is unchanged.
    """
    g = as_spins(g)
    if g.shape[0] != inst.n:
        raise ValueError(f"gauge length {g.shape[0]} does not match n={inst.n}")
    h = inst.h * g
    J = {(i, j): v * int(g[i]) * int(g[j]) for (i, j), v in inst.J.items()}
    planted = None if inst.planted is None else inst.planted * g
    return IsingInstance(inst.n, h, J, inst.offset, inst.family, inst.seed,
                         planted, inst.planted_energy, inst.topology)


def precision_ok(inst: IsingInstance, levels: int = 8) -> bool:
    """True if every coefficient, rescaled by the largest magnitude, lies on
    the grid ``{-1, -(levels-1)/levels, ..., +1}``."""
    scale = inst.coupling_scale()
    if scale == 0:
        return True
    vals = np.concatenate([inst.h, np.fromiter(inst.J.values(), float, len(inst.J))]) / scale * levels
    return bool(np.all(np.abs(vals - np.round(vals)) < 1e-9))


# --- generators --------------------------------------------------------------

def _topology_tag(topology: Graph | ChimeraSpec) -> tuple[Graph, str | None]:
    if isinstance(topology, ChimeraSpec):
        return build_chimera(topology), topology.header()
    return topology, None


def gen_random_ising(topology: Graph | ChimeraSpec, seed=None) -> IsingInstance:
    """Couplers uniform in {-1, +1} on every topology edge, no fields."""
    g, tag = _topology_tag(topology)
    rng = np.random.default_rng(seed)
    edges = g.sorted_edges()
    vals = rng.choice([-1.0, 1.0], size=len(edges))
    return IsingInstance(g.n, np.zeros(g.n), dict(zip(edges, vals)), family="ising",
                         seed=seed, topology=tag)


def gen_random_qubo(topology: Graph | ChimeraSpec, seed=None) -> QuboInstance:
    g, tag = _topology_tag(topology)
    rng = np.random.default_rng(seed)
    edges = g.sorted_edges()
    vals = rng.choice([-1.0, 1.0], size=len(edges))
    return QuboInstance(g.n, np.zeros(g.n), dict(zip(edges, vals)), family="qubo", seed=seed,
                        topology=tag)


def independent_set_fields(n: int, J: Mapping[tuple[int, int], float]) -> np.ndarray:
    """``h_i = (sum_j J_ij) - 2``."""
    h = np.full(n, -2.0)
    for (i, j), v in J.items():
        h[i] += v
        h[j] += v
    return h


def mis_instance(topology: Graph | ChimeraSpec, couplers: Mapping, family: str = "mis",
                 seed=None) -> IsingInstance:
    g, tag = _topology_tag(topology)
    J = {k: float(v) for k, v in couplers.items() if v != 0}
    return IsingInstance(g.n, independent_set_fields(g.n, J), J, family=family, seed=seed,
                         topology=tag)


def gen_mis(topology: Graph | ChimeraSpec, seed=None) -> IsingInstance:
    """Each edge kept as a J=1 penalty with probability 1/2."""
    g, _ = _topology_tag(topology)
    rng = np.random.default_rng(seed)
    edges = g.sorted_edges()
    vals = rng.integers(0, 2, size=len(edges)).astype(float)
    return mis_instance(topology, dict(zip(edges, vals)), "mis", seed)


def gen_mais(topology: Graph | ChimeraSpec, seed=None) -> IsingInstance:
    """Affinity variant: couplers uniform in {-1, +1}, same field rule."""
    g, _ = _topology_tag(topology)
    rng = np.random.default_rng(seed)
    edges = g.sorted_edges()
    vals = rng.choice([-1.0, 1.0], size=len(edges))
    return mis_instance(topology, dict(zip(edges, vals)), "mais", seed)


def decode_independent_set(inst: IsingInstance, s) -> set[int]:
    """Nodes with spin +1 (the "in set" convention)."""
    if inst.family not in ("mis", "mais"):
        raise ValueError(f"decode_independent_set needs a mis/mais instance, got {inst.family!r}")
    s = as_spins(s, inst.n)
    return {int(i) for i in np.flatnonzero(s == 1)}


@dataclass
class PlantedLoop:
    nodes: list[int]
    frustrated: tuple[int, int]

    @property
    def length(self) -> int:
        return len(self.nodes)


def _loop_ok(length: int, policy: str) -> bool:
    if policy == "any":
        return True
    if policy == "short4":
        return length == 4
    return length > 8


def random_loop(g: Graph, rng: np.random.Generator, policy: str = "any",
                max_steps: int | None = None, max_tries: int = 10_000) -> list[int]:
    """Closed walk on ``g`` that is self-avoiding until the first revisit.

    The loop is the walk segment from the revisited node back to itself.
    Walks that fail to close, or close with a length rejected by ``policy``,
    are resampled.
    """
    adj = [np.array(sorted(a)) for a in g.adjacency]
    starts = [v for v in range(g.n) if len(adj[v]) >= 2]
    if not starts:
        raise ValueError("topology has no node of degree >= 2; no loops exist")
    max_steps = max_steps or 4 * g.n + 16
    for _ in range(max_tries):
        v = starts[int(rng.integers(len(starts)))]
        path = [v]
        pos = {v: 0}
        prev = -1
        for _ in range(max_steps):
            nbrs = adj[v]
            if prev >= 0:
                nbrs = nbrs[nbrs != prev]
            if len(nbrs) == 0:
                break
            w = int(nbrs[int(rng.integers(len(nbrs)))])
            if w in pos:
                loop = path[pos[w]:]
                if _loop_ok(len(loop), policy):
                    return loop
                break
            pos[w] = len(path)
            path.append(w)
            prev, v = v, w
    raise RuntimeError(f"could not sample a {policy!r} loop in {max_tries} tries")


def plant_loops(topology: Graph, n_loops: int, loop_policy: str = "any", seed=None,
                planted=None) -> tuple[IsingInstance, list[PlantedLoop]]:
    """Frustrated-loop instance around a planted configuration.

    Every loop gets couplers ``-s_i s_j`` (satisfied by the planted state)
    except one random edge flipped to ``+s_i s_j``. Loop couplers add up on
    shared edges. Planted energy = ``sum(2 - len)``.
    """
    if loop_policy not in LOOP_POLICIES:
        raise ValueError(f"loop_policy must be one of {LOOP_POLICIES}")
    rng = np.random.default_rng(seed)
    s = rng.choice(np.array([-1, 1], dtype=np.int8), size=topology.n) if planted is None \
        else as_spins(planted, topology.n)
    J: dict[tuple[int, int], float] = {}
    loops = []
    for _ in range(n_loops):
        nodes = random_loop(topology, rng, loop_policy)
        L = len(nodes)
        frustrated = int(rng.integers(L))
        for e in range(L):
            i, j = nodes[e], nodes[(e + 1) % L]
            sign = 1.0 if e == frustrated else -1.0
            key = _pair(i, j)
            J[key] = J.get(key, 0.0) + sign * int(s[i]) * int(s[j])
        loops.append(PlantedLoop(nodes, _pair(nodes[frustrated], nodes[(frustrated + 1) % L])))
    e_planted = float(sum(2 - lp.length for lp in loops))
    inst = IsingInstance(topology.n, np.zeros(topology.n), J, family="planted", seed=seed,
                         planted=s, planted_energy=e_planted)
    return inst, loops


def loop_count(n: int, cycle_density: float) -> int:
    if cycle_density <= 0:
        raise ValueError("cycle_density must be positive")
    return math.ceil(cycle_density * n - 1e-9)


def gen_planted(spec: ChimeraSpec | Graph, cycle_density: float, loop_policy: str = "any",
                seed=None) -> IsingInstance:
    """Planted-solution instance with ``ceil(C * n)`` frustrated loops."""
    g, tag = _topology_tag(spec)
    inst, _ = plant_loops(g, loop_count(g.n, cycle_density), loop_policy, seed)
    return replace(inst, topology=tag)


# --- JSON instance files ----------------------------------------------------

def instance_to_dict(inst: IsingInstance) -> dict:
    d = {
        "family": inst.family,
        "seed": inst.seed,
        "n": inst.n,
        "offset": inst.offset,
        "h": [float(x) for x in inst.h],
        "J": [[i, j, v] for (i, j), v in inst.J.items()],
        "topology": inst.topology,
    }
    if inst.planted is not None:
        d["planted"] = [int(x) for x in inst.planted]
    if inst.planted_energy is not None:
        d["planted_energy"] = inst.planted_energy
    return d


def instance_from_dict(d: dict) -> IsingInstance:
    return IsingInstance(
        n=int(d["n"]),
        h=np.array(d["h"], dtype=float),
        J={(int(i), int(j)): float(v) for i, j, v in d["J"]},
        offset=float(d.get("offset", 0.0)),
        family=d.get("family", "custom"),
        seed=d.get("seed"),
        planted=np.array(d["planted"]) if d.get("planted") is not None else None,
        planted_energy=d.get("planted_energy"),
        topology=d.get("topology"),
    )


def write_instance(inst: IsingInstance, path: str | Path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(inst), indent=1) + "\n")


def read_instance(path: str | Path) -> IsingInstance:
    return instance_from_dict(json.loads(Path(path).read_text()))


def chimera_spec_of(inst: IsingInstance) -> ChimeraSpec | None:
    return ChimeraSpec.parse_header(inst.topology) if inst.topology else None
