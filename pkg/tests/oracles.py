"""Independent reference implementations used only by the tests.

They are deliberately naive (itertools, dense loops) so they share no code
path with the package.
"""

from __future__ import annotations

import itertools
from collections import deque

import numpy as np

from qabench.chimera import ChimeraSpec, build_chimera
from qabench.graph import Graph


def naive_energy(n, h, J, offset, s) -> float:
    e = offset
    for i in range(n):
        e += h[i] * s[i]
    for (i, j), v in J.items():
        e += v * s[i] * s[j]
    return e


def all_spins(n: int):
    return itertools.product((-1, 1), repeat=n)


def exhaustive_min(inst) -> float:
    return min(naive_energy(inst.n, inst.h, inst.J, inst.offset, s) for s in all_spins(inst.n))


def max_independent_set_size(g: Graph) -> int:
    """Branch on the lowest-index remaining node (take it or drop it)."""
    adj = [set(a) for a in g.adjacency]

    def solve(alive: frozenset) -> int:
        if not alive:
            return 0
        v = min(alive)
        drop = solve(alive - {v})
        take = 1 + solve(alive - {v} - adj[v])
        return max(drop, take)

    return solve(frozenset(range(g.n)))


def is_independent(g: Graph, nodes) -> bool:
    nodes = set(nodes)
    return not any(u in nodes and v in nodes for u, v in g.edges)


def q_direct(g: Graph, labels) -> float:
    """Double-sum modularity including v = w terms."""
    n, m = g.n, g.m
    A = np.zeros((n, n))
    for u, v in g.edges:
        A[u, v] = A[v, u] = 1
    k = A.sum(1)
    q = 0.0
    for v in range(n):
        for w in range(n):
            if labels[v] == labels[w]:
                q += A[v, w] - k[v] * k[w] / (2 * m)
    return q / (2 * m)


def best_bipartition_q(g: Graph) -> float:
    """Max modularity over all 2-colourings (a single colour allowed)."""
    best = -np.inf
    for bits in itertools.product((0, 1), repeat=g.n - 1):
        best = max(best, q_direct(g, (0, *bits)))
    return best


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def best_partition_q(g: Graph) -> float:
    best = -np.inf
    for part in set_partitions(list(range(g.n))):
        labels = [0] * g.n
        for c, block in enumerate(part):
            for v in block:
                labels[v] = c
        best = max(best, q_direct(g, labels))
    return best


def floyd_warshall_diameter(g: Graph) -> int:
    """Largest finite distance (equals the largest component's diameter only
    when that component is the widest; callers pass connected graphs)."""
    n = g.n
    D = np.full((n, n), np.inf)
    np.fill_diagonal(D, 0)
    for u, v in g.edges:
        D[u, v] = D[v, u] = 1
    for k in range(n):
        D = np.minimum(D, D[:, [k]] + D[[k], :])
    finite = D[np.isfinite(D)]
    return int(finite.max()) if finite.size else 0


def bfs_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    seen = {0}
    q = deque([0])
    while q:
        u = q.popleft()
        for w in g.adjacency[u]:
            if w not in seen:
                seen.add(w)
                q.append(w)
    return len(seen) == g.n


def random_chimera_subgraph(rng: np.random.Generator, max_n: int = 24, min_n: int = 4):
    """Connected induced subgraph of a random small Chimera grid.

    Returns (spec, node_map, subgraph) with ``node_map[v]`` the host id of
    subgraph node v. Grown by a random BFS frontier from a random root.
    """
    rows, cols = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    spec = ChimeraSpec(rows, cols)
    host = build_chimera(spec)
    target = int(rng.integers(min_n, min(max_n, host.n) + 1))
    root = int(rng.integers(host.n))
    chosen = [root]
    chosen_set = {root}
    frontier = set(host.adjacency[root])
    while len(chosen) < target and frontier:
        v = int(rng.choice(sorted(frontier)))
        frontier.discard(v)
        chosen.append(v)
        chosen_set.add(v)
        frontier |= set(host.adjacency[v]) - chosen_set
    node_map = np.array(sorted(chosen))
    sub, _ = host.induced_subgraph(node_map.tolist())
    return spec, node_map, sub


def best_bipartition_q_masks(g: Graph) -> float:
    """Same maximum as ``best_bipartition_q`` but scanning bitmasks with the
    edge-count form of Q: sum_c [e_c / m - (d_c / 2m)^2]."""
    n, m = g.n, g.m
    deg = np.array([len(a) for a in g.adjacency], float)
    eu = np.array([u for u, _ in g.edges])
    ev = np.array([v for _, v in g.edges])
    masks = np.arange(2 ** (n - 1))
    bits = ((masks[:, None] >> np.arange(n - 1)) & 1).astype(bool)
    side = np.concatenate([np.zeros((len(masks), 1), bool), bits], axis=1)
    same = side[:, eu] == side[:, ev]
    e1 = np.sum(same & side[:, eu], axis=1)
    e0 = np.sum(same & ~side[:, eu], axis=1)
    d1 = side @ deg
    d0 = deg.sum() - d1
    q = (e0 + e1) / m - (d0 / (2 * m)) ** 2 - (d1 / (2 * m)) ** 2
    return float(q.max())
