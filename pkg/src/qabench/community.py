"""Modularity-based community detection.

``recursive_bipartition`` is the hybrid scheme: each community is split by
minimising the Ising form of its bipartition modularity with any supplied
solver, and the split is kept only if the global modularity strictly
increases. ``greedy_local_move`` is a Louvain-style classical baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .graph import Graph, Partition, modularity
from .instances import IsingInstance
from .solvers import (AnnealSchedule, ProjectorParams, SolveResult, brute_force,
                      metropolis_anneal, projector_sqa)

SPLIT_TOL = 1e-12

IsingSolver = Callable[[IsingInstance, int, int], SolveResult]


@dataclass
class BipartitionProblem:
    nodes: list[int]
    B: np.ndarray
    instance: IsingInstance
    m: int


def bipartition_ising(g: Graph, nodes: Sequence[int] | None = None) -> BipartitionProblem:
    """Ising instance whose energy is minus the bipartition modularity of the
    subgraph induced on ``nodes``.

    With ``B = A - k k^T / 2m`` from the induced subgraph,
    ``Q(s) = (1/4m) [sum_v B_vv + 2 sum_{v<w} B_vw s_v s_w]``, so each pair
    gets coupler ``-B_vw / 2m`` and the diagonal goes to the offset.
    """
    nodes = list(range(g.n)) if nodes is None else list(nodes)
    sub, _ = g.induced_subgraph(nodes)
    m = sub.m
    if m == 0:
        raise ValueError("trivial subproblem: no edges among the given nodes")
    n = sub.n
    A = np.zeros((n, n))
    for u, v in sub.edges:
        A[u, v] = A[v, u] = 1.0
    k = A.sum(axis=1)
    B = A - np.outer(k, k) / (2.0 * m)
    iu, ju = np.triu_indices(n, k=1)
    J = {(int(i), int(j)): -B[i, j] / (2.0 * m) for i, j in zip(iu, ju)}
    offset = -float(np.trace(B)) / (4.0 * m)
    inst = IsingInstance(n, np.zeros(n), J, offset, family="bipartition")
    return BipartitionProblem(nodes, B, inst, m)


def default_budget(n: int) -> int:
    """Solver steps for an n-node sub-problem (grows like n^1.15)."""
    return max(50, math.ceil(20 * n ** 1.15))


def brute_solver(inst: IsingInstance, budget: int, seed: int) -> SolveResult:
    return brute_force(inst)


def sa_solver(restarts: int = 10) -> IsingSolver:
    def solve(inst, budget, seed):
        # modularity couplers are O(1/m), so the schedule is scaled to them
        scale = inst.coupling_scale() or 1.0
        sched = AnnealSchedule(sweeps=budget, T_start=3.0 * scale, T_end=scale / 60.0,
                               restarts=restarts, seed=seed)
        return metropolis_anneal(inst, sched)
    return solve


def sqa_solver(walkers: int = 64) -> IsingSolver:
    def solve(inst, budget, seed):
        return projector_sqa(inst, ProjectorParams(walkers=walkers, steps=budget, seed=seed))
    return solve


def auto_solver(inst: IsingInstance, budget: int, seed: int) -> SolveResult:
    """Brute force up to 20 nodes, annealing above."""
    if inst.n <= 20:
        return brute_force(inst)
    return sa_solver()(inst, budget, seed)


@dataclass
class SplitAttempt:
    size: int
    delta_q: float
    accepted: bool


@dataclass
class CommunityResult:
    partition: Partition
    modularity: float
    steps: int
    trace: list[SplitAttempt] = field(default_factory=list)

    def format_partition(self) -> str:
        return "".join(f"{v} {c}\n" for v, c in enumerate(self.partition.assignment))

    def format_trace(self) -> str:
        lines = ["size delta_q accepted"]
        lines += [f"{t.size} {t.delta_q!r} {int(t.accepted)}" for t in self.trace]
        return "\n".join(lines) + "\n"


def recursive_bipartition(g: Graph, ising_solver: IsingSolver = auto_solver,
                          budget_policy: Callable[[int], int] = default_budget,
                          seed: int = 0, refine: bool = False) -> CommunityResult:
    """Top-down splitting until no split raises global modularity.

    Communities are attempted largest first (ties by smallest node). With
    ``refine`` the result seeds :func:`greedy_local_move`.
    """
    if g.m == 0:
        raise ValueError("no edges")
    labels = [0] * g.n
    q = 0.0
    steps = 0
    trace: list[SplitAttempt] = []
    pending = [list(range(g.n))]
    next_label = 1
    attempt = 0
    while pending:
        pending.sort(key=lambda c: (-len(c), c[0]))
        comm = pending.pop(0)
        if len(comm) < 2:
            continue
        try:
            prob = bipartition_ising(g, comm)
        except ValueError:
            continue
        res = ising_solver(prob.instance, budget_policy(len(comm)), seed + attempt)
        attempt += 1
        steps += res.steps
        side_a = [v for v, s in zip(comm, res.best_config) if s == 1]
        side_b = [v for v, s in zip(comm, res.best_config) if s != 1]
        if not side_a or not side_b:
            trace.append(SplitAttempt(len(comm), 0.0, False))
            continue
        trial = labels.copy()
        for v in side_b:
            trial[v] = next_label
        q_new = modularity(g, Partition.from_labels(trial))
        dq = q_new - q
        accepted = dq > SPLIT_TOL
        trace.append(SplitAttempt(len(comm), dq, accepted))
        if accepted:
            labels, q = trial, q_new
            next_label += 1
            pending += [side_a, side_b]
    part = Partition.from_labels(labels)
    result = CommunityResult(part, modularity(g, part), steps, trace)
    if refine:
        refined = greedy_local_move(g, seed=seed, initial=part)
        if refined.modularity > result.modularity:
            result = CommunityResult(refined.partition, refined.modularity, steps, trace)
    return result


# --- Louvain-style baseline ---------------------------------------------------

def _local_moves(adj: list[dict[int, float]], loops: list[float], comm: list[int],
                 order: np.ndarray, m2: float) -> bool:
    """Move nodes to the neighbouring community with the best modularity gain
    until none helps. Returns whether anything moved."""
    k = [sum(a.values()) + 2 * loops[v] for v, a in enumerate(adj)]
    tot: dict[int, float] = {}
    for v, c in enumerate(comm):
        tot[c] = tot.get(c, 0.0) + k[v]
    moved_any = False
    improved = True
    while improved:
        improved = False
        for v in order:
            v = int(v)
            cv = comm[v]
            links: dict[int, float] = {}
            for w, wt in adj[v].items():
                links[comm[w]] = links.get(comm[w], 0.0) + wt
            tot[cv] -= k[v]
            # gain of inserting v into c, relative to leaving it isolated
            best_c = cv
            best_gain = links.get(cv, 0.0) - tot[cv] * k[v] / m2
            for c, lw in sorted(links.items()):
                gain = lw - tot[c] * k[v] / m2
                if gain > best_gain + SPLIT_TOL:
                    best_c, best_gain = c, gain
            tot[best_c] = tot.get(best_c, 0.0) + k[v]
            if best_c != cv:
                comm[v] = best_c
                improved = moved_any = True
    return moved_any


def greedy_local_move(g: Graph, seed: int = 0, initial: Partition | None = None) -> CommunityResult:
    """Two-phase local moving + contraction until no node changes community."""
    if g.m == 0:
        raise ValueError("no edges")
    rng = np.random.default_rng(seed)
    adj: list[dict[int, float]] = [dict() for _ in range(g.n)]
    for u, v in g.edges:
        adj[u][v] = adj[u].get(v, 0.0) + 1.0
        adj[v][u] = adj[v].get(u, 0.0) + 1.0
    loops = [0.0] * g.n
    m2 = 2.0 * g.m
    # member[v]: level-0 node v -> current aggregated node
    member = list(range(g.n))
    comm = list(range(g.n)) if initial is None else list(initial.assignment)
    seeded = initial is not None
    steps = 0
    while True:
        moved = _local_moves(adj, loops, comm, rng.permutation(len(adj)), m2)
        steps += 1
        relabel = {c: i for i, c in enumerate(sorted(set(comm)))}
        comm = [relabel[c] for c in comm]
        member = [comm[a] for a in member]
        nc = len(relabel)
        if nc == len(adj) or not (moved or seeded):
            break
        seeded = False
        new_adj: list[dict[int, float]] = [dict() for _ in range(nc)]
        new_loops = [0.0] * nc
        for v, a in enumerate(adj):
            cv = comm[v]
            new_loops[cv] += loops[v]
            for w, wt in a.items():
                cw = comm[w]
                if cw == cv:
                    new_loops[cv] += wt / 2.0
                else:
                    new_adj[cv][cw] = new_adj[cv].get(cw, 0.0) + wt
        adj, loops = new_adj, new_loops
        comm = list(range(nc))
    part = Partition.from_labels(member)
    return CommunityResult(part, modularity(g, part), steps)


def resolution_limit_bound(m: int) -> float:
    """Smallest internal edge count a modularity-optimal community can have."""
    if m < 0:
        raise ValueError("m must be non-negative")
    return math.sqrt(m / 2.0)


def community_edge_counts(g: Graph, p: Partition) -> list[int]:
    counts = [0] * p.num_communities
    for u, v in g.edges:
        if p.assignment[u] == p.assignment[v]:
            counts[p.assignment[u]] += 1
    return counts
