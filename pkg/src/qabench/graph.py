"""Undirected simple graphs, partitions, and the metric suite used to
characterize every graph family (Chimera, minors, mention/route graphs,
Erdos-Renyi controls)."""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on nodes ``0..node_count-1``.

    Edges are stored once as ``(u, v)`` with ``u < v``. Self-loops and
    duplicates are rejected/collapsed at construction.
    """

    node_count: int
    edges: frozenset = field(default_factory=frozenset)
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.node_count < 0:
            raise ValueError("node_count must be non-negative")
        normed = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise ValueError(f"edge ({u}, {v}) out of range for {self.node_count} nodes")
            normed.add(_norm_edge(u, v))
        object.__setattr__(self, "edges", frozenset(normed))
        if self.labels is not None:
            if len(self.labels) != self.node_count:
                raise ValueError("labels length must equal node_count")
            object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], node_count: int | None = None,
                   labels: Sequence[str] | None = None) -> "Graph":
        """Build from an edge iterable, dropping self-loops and duplicates."""
        es = {_norm_edge(int(u), int(v)) for u, v in edges if u != v}
        if node_count is None:
            node_count = 1 + max((max(e) for e in es), default=-1)
        return cls(node_count, frozenset(es), tuple(labels) if labels is not None else None)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def n(self) -> int:
        return self.node_count

    @cached_property
    def adjacency(self) -> tuple[frozenset, ...]:
        adj = [set() for _ in range(self.node_count)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self.edges

    def induced_subgraph(self, nodes: Sequence[int]) -> tuple["Graph", list[int]]:
        """Subgraph induced on ``nodes``, relabelled ``0..len(nodes)-1`` in the
        given order. Returns the subgraph and the list mapping new id -> old id."""
        nodes = list(nodes)
        index = {v: i for i, v in enumerate(nodes)}
        if len(index) != len(nodes):
            raise ValueError("duplicate nodes in subset")
        es = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        labels = None if self.labels is None else [self.labels[v] for v in nodes]
        return Graph.from_edges(es, len(nodes), labels), nodes


@dataclass(frozen=True)
class Partition:
    """Node -> community assignment with contiguous ids starting at 0."""

    assignment: tuple[int, ...]

    def __post_init__(self):
        a = tuple(int(c) for c in self.assignment)
        if a and (min(a) < 0 or set(a) != set(range(max(a) + 1))):
            raise ValueError("community ids must form a contiguous range starting at 0")
        object.__setattr__(self, "assignment", a)

    @classmethod
    def from_labels(cls, labels: Sequence) -> "Partition":
        """Relabel arbitrary community labels to 0.. in order of first appearance."""
        remap: dict = {}
        return cls(tuple(remap.setdefault(c, len(remap)) for c in labels))

    @property
    def num_communities(self) -> int:
        return 1 + max(self.assignment, default=-1)

    def communities(self) -> list[list[int]]:
        groups: list[list[int]] = [[] for _ in range(self.num_communities)]
        for v, c in enumerate(self.assignment):
            groups[c].append(v)
        return groups


@dataclass
class GraphMetrics:
    n: int
    m: int
    avg_degree: float
    degree_distribution: dict[int, int]
    clustering_coefficient: float
    diameter: int
    num_components: int
    assortativity: float
    assortativity_defined: bool = True

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "avg_degree": self.avg_degree,
            "degree_distribution": {str(k): v for k, v in sorted(self.degree_distribution.items())},
            "clustering_coefficient": self.clustering_coefficient,
            "diameter": self.diameter,
            "num_components": self.num_components,
            "assortativity": self.assortativity,
            "assortativity_defined": self.assortativity_defined,
        }


def triangle_count(g: Graph) -> int:
    adj = g.adjacency
    count = 0
    for u, v in g.edges:
        count += len(adj[u] & adj[v])
    return count // 3


def clustering_coefficient(g: Graph) -> float:
    """Global transitivity: 3 * triangles / connected triples (0 if no triples)."""
    triples = sum(d * (d - 1) // 2 for d in g.degrees)
    if triples == 0:
        return 0.0
    return 3.0 * triangle_count(g) / triples


def bfs_distances(g: Graph, source: int) -> dict[int, int]:
    adj = g.adjacency
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if w not in dist:
                dist[w] = du
                queue.append(w)
    return dist


def connected_components(g: Graph) -> list[list[int]]:
    """Components as sorted node lists, ordered by smallest member."""
    seen = [False] * g.node_count
    comps = []
    for s in range(g.node_count):
        if seen[s]:
            continue
        comp = list(bfs_distances(g, s))
        for v in comp:
            seen[v] = True
        comps.append(sorted(comp))
    return comps


def largest_component(g: Graph) -> list[int]:
    """Node list of the largest component; ties go to the one with the smallest node id."""
    comps = connected_components(g)
    if not comps:
        return []
    return max(comps, key=lambda c: (len(c), -c[0]))


def diameter(g: Graph) -> int:
    """Exact diameter of the largest connected component (BFS from every node)."""
    if g.node_count == 0:
        raise ValueError("empty graph")
    comp = largest_component(g)
    return max(max(bfs_distances(g, s).values()) for s in comp)


def modularity(g: Graph, p: Partition) -> float:
    """Newman modularity Q of ``p`` on ``g``.

    Evaluated per community as ``sum_c [l_c/m - (d_c/2m)^2]``, which is the
    full double sum over ordered node pairs including the ``v == w``
    degree-product terms.
    """
    if g.m == 0:
        raise ValueError("no edges")
    if len(p.assignment) != g.node_count:
        raise ValueError("partition size does not match graph")
    a = p.assignment
    k = p.num_communities
    internal = [0] * k
    degsum = [0] * k
    for u, v in g.edges:
        if a[u] == a[v]:
            internal[a[u]] += 1
    for v, d in enumerate(g.degrees):
        degsum[a[v]] += d
    m = g.m
    return sum(internal[c] / m - (degsum[c] / (2.0 * m)) ** 2 for c in range(k))


def degree_assortativity(g: Graph) -> tuple[float, bool]:
    """Pearson correlation of endpoint degrees over edges (each edge both ways).

    Returns ``(value, defined)``; zero-variance cases give ``(0.0, False)``.
    """
    if g.m == 0:
        return 0.0, False
    deg = g.degrees
    xs = []
    ys = []
    for u, v in g.edges:
        xs += [deg[u], deg[v]]
        ys += [deg[v], deg[u]]
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    if sxx <= 1e-15 or syy <= 1e-15:
        return 0.0, False
    return max(-1.0, min(1.0, sxy / math.sqrt(sxx * syy))), True


def graph_metrics(g: Graph) -> GraphMetrics:
    n, m = g.node_count, g.m
    assort, defined = degree_assortativity(g)
    return GraphMetrics(
        n=n,
        m=m,
        avg_degree=2.0 * m / n if n else 0.0,
        degree_distribution=dict(sorted(Counter(g.degrees).items())),
        clustering_coefficient=clustering_coefficient(g),
        diameter=diameter(g) if n else 0,
        num_components=len(connected_components(g)),
        assortativity=assort,
        assortativity_defined=defined,
    )


def is_bipartite(g: Graph) -> bool:
    color = [-1] * g.node_count
    adj = g.adjacency
    for s in range(g.node_count):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if color[w] < 0:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return False
    return True


# --- edge-list text format -------------------------------------------------

def format_edge_list(g: Graph) -> str:
    lines = [f"nodes {g.node_count}"]
    lines += [f"{u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    """Parse "u v" lines; '#' lines are comments; optional "nodes N" header."""
    node_count = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "nodes":
            node_count = int(parts[1])
            continue
        if len(parts) < 2:
            raise ValueError(f"line {lineno}: expected 'u v'")
        edges.append((int(parts[0]), int(parts[1])))
    return Graph.from_edges(edges, node_count)


def write_edge_list(g: Graph, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(g))


def read_edge_list(path: str | Path) -> Graph:
    return parse_edge_list(Path(path).read_text())
