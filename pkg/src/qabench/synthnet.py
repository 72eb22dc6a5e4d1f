"""Real-world-like graph minors of the Chimera graph, and the Erdos-Renyi
control family.

The minor generator works in three phases on a union-find over host nodes:

1. intra-cell: merge each (left i, right i) pair with probability p1,
   creating triangles between merged pairs and the rest of the cell;
2. inter-cell: ``p2_iters`` passes over minor edges that are realised by an
   inter-cell host edge, merging endpoints with probability p2 (grows hubs,
   shortens paths);
3. thinning: drop each minor edge with probability p3 unless that
   disconnects its endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chimera import HALF_CELL, LEFT, RIGHT, ChimeraSpec, MinorEmbedding, build_chimera
from .graph import Graph, clustering_coefficient, diameter, largest_component


@dataclass(frozen=True)
class MinorGenParams:
    # calibrated on 8x8 hosts: utilization ~0.63, clustering ~0.15
    p1: float = 0.4
    p2: float = 0.1
    p2_iters: int = 2
    p3: float = 0.3
    seed: int | None = 0

    def __post_init__(self):
        for name in ("p1", "p2", "p3"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} is not a probability")
        if self.p2_iters < 0:
            raise ValueError("p2_iters must be non-negative")


class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            lo, hi = min(ra, rb), max(ra, rb)
            self.parent[hi] = lo


def _minor_edges(host: Graph, dsu: _DSU, only_intercell: ChimeraSpec | None = None) -> list:
    es = set()
    for a, b in host.edges:
        if only_intercell is not None and only_intercell.cell_of(a) == only_intercell.cell_of(b):
            continue
        ra, rb = dsu.find(a), dsu.find(b)
        if ra != rb:
            es.add((min(ra, rb), max(ra, rb)))
    return sorted(es)


def _reachable(adj: dict[int, set], a: int, b: int) -> bool:
    seen = {a}
    stack = [a]
    while stack:
        u = stack.pop()
        if u == b:
            return True
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return False


def generate_chimera_minor(spec: ChimeraSpec, params: MinorGenParams | None = None
                           ) -> tuple[Graph, MinorEmbedding]:
    """Random graph minor of the Chimera graph with its chain map.

    Minor nodes are numbered by their smallest host node.
    """
    p = params or MinorGenParams()
    rng = np.random.default_rng(p.seed)
    host = build_chimera(spec)
    dsu = _DSU(host.n)
    alive = [v for v in range(host.n) if v not in spec.missing]

    for r in range(spec.rows):
        for c in range(spec.cols):
            for i in range(HALF_CELL):
                if rng.random() < p.p1:
                    a, b = spec.node_id(r, c, LEFT, i), spec.node_id(r, c, RIGHT, i)
                    if a not in spec.missing and b not in spec.missing:
                        dsu.union(a, b)

    for _ in range(p.p2_iters):
        edges = _minor_edges(host, dsu, only_intercell=spec)
        for k in rng.permutation(len(edges)):
            a, b = edges[k]
            if dsu.find(a) != dsu.find(b) and rng.random() < p.p2:
                dsu.union(a, b)

    adj: dict[int, set] = {}
    for v in alive:
        adj.setdefault(dsu.find(v), set())
    edges = _minor_edges(host, dsu)
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    for k in rng.permutation(len(edges)):
        a, b = edges[k]
        if rng.random() < p.p3:
            adj[a].discard(b)
            adj[b].discard(a)
            if not _reachable(adj, a, b):
                adj[a].add(b)
                adj[b].add(a)

    roots = sorted(adj)
    index = {r: i for i, r in enumerate(roots)}
    chains: dict[int, set] = {i: set() for i in range(len(roots))}
    for v in alive:
        chains[index[dsu.find(v)]].add(v)
    minor_edges = [(index[a], index[b]) for a in roots for b in adj[a] if a < b]
    g = Graph.from_edges(minor_edges, len(roots))
    return g, MinorEmbedding({k: frozenset(v) for k, v in chains.items()})


def utilization(emb: MinorEmbedding, spec: ChimeraSpec) -> float:
    """Minor nodes per host node."""
    return len(emb.chains) / spec.node_count


def format_chains(emb: MinorEmbedding) -> str:
    return "".join(f"{t}: {' '.join(str(q) for q in sorted(chain))}\n"
                   for t, chain in sorted(emb.chains.items()))


def parse_chains(text: str) -> MinorEmbedding:
    chains = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        t, rest = line.split(":", 1)
        chains[int(t)] = frozenset(int(x) for x in rest.split())
    return MinorEmbedding(chains)


def gen_erdos_renyi(n: int, p: float, seed=None) -> Graph:
    """G(n, p) restricted to its largest connected component (relabelled in
    increasing original id order)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} is not a probability")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    g = Graph.from_edges(zip(iu[keep].tolist(), ju[keep].tolist()), n)
    comp = largest_component(g)
    sub, _ = g.induced_subgraph(comp)
    return sub


def minor_stats(spec: ChimeraSpec, params: MinorGenParams) -> dict:
    g, emb = generate_chimera_minor(spec, params)
    return {
        "nodes": g.n,
        "edges": g.m,
        "utilization": utilization(emb, spec),
        "clustering": clustering_coefficient(g),
        "diameter": diameter(g),
        "max_degree": max(g.degrees),
    }
