"""Chimera topology construction, sub-grid selection, and minor embeddings.

Node ids are row-major over cells, left side first::

    id = 8 * (row * cols + col) + 4 * side + index,   side 0 = left, 1 = right

Each cell is a K4,4 between its left and right halves. Left nodes couple
vertically to the same index in the cells above/below; right nodes couple
horizontally to the same index in the cells left/right.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .graph import Graph, bfs_distances

HALF_CELL = 4
LEFT, RIGHT = 0, 1


@dataclass(frozen=True)
class ChimeraSpec:
    rows: int
    cols: int
    missing: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("Chimera dimensions must be positive")
        object.__setattr__(self, "missing", frozenset(int(x) for x in self.missing))

    @classmethod
    def square(cls, k: int) -> "ChimeraSpec":
        return cls(k, k)

    @property
    def node_count(self) -> int:
        return 2 * HALF_CELL * self.rows * self.cols

    def node_id(self, row: int, col: int, side: int, index: int) -> int:
        return 2 * HALF_CELL * (row * self.cols + col) + HALF_CELL * side + index

    def coords(self, node: int) -> tuple[int, int, int, int]:
        cell, rem = divmod(node, 2 * HALF_CELL)
        row, col = divmod(cell, self.cols)
        side, index = divmod(rem, HALF_CELL)
        return row, col, side, index

    def cell_of(self, node: int) -> tuple[int, int]:
        return self.coords(node)[:2]

    def header(self) -> str:
        s = f"chimera {self.rows} {self.cols}"
        if self.missing:
            s += " missing: " + " ".join(str(x) for x in sorted(self.missing))
        return s

    @classmethod
    def parse_header(cls, text: str) -> "ChimeraSpec":
        m = re.fullmatch(r"\s*chimera\s+(\d+)\s+(\d+)(?:\s+missing:\s*([\d\s]*))?\s*", text)
        if not m:
            raise ValueError(f"not a Chimera header: {text!r}")
        missing = frozenset(int(x) for x in (m.group(3) or "").split())
        return cls(int(m.group(1)), int(m.group(2)), missing)


def chimera_edges(spec: ChimeraSpec) -> list[tuple[int, int]]:
    edges = []
    nid = spec.node_id
    for r in range(spec.rows):
        for c in range(spec.cols):
            for i in range(HALF_CELL):
                for j in range(HALF_CELL):
                    edges.append((nid(r, c, LEFT, i), nid(r, c, RIGHT, j)))
                if r + 1 < spec.rows:
                    edges.append((nid(r, c, LEFT, i), nid(r + 1, c, LEFT, i)))
                if c + 1 < spec.cols:
                    edges.append((nid(r, c, RIGHT, i), nid(r, c + 1, RIGHT, i)))
    if spec.missing:
        edges = [e for e in edges if e[0] not in spec.missing and e[1] not in spec.missing]
    return edges


def build_chimera(spec: ChimeraSpec) -> Graph:
    return Graph.from_edges(chimera_edges(spec), spec.node_count)


def random_subgrid(full: ChimeraSpec, k: int, seed=None) -> tuple[ChimeraSpec, np.ndarray]:
    """Pick a uniformly random feasible anchor cell and return the k x k block
    spec plus the injection (block node id -> full node id)."""
    if not 1 <= k <= min(full.rows, full.cols):
        raise ValueError(f"sub-grid size {k} out of range for {full.rows}x{full.cols}")
    rng = np.random.default_rng(seed)
    r0 = int(rng.integers(0, full.rows - k + 1))
    c0 = int(rng.integers(0, full.cols - k + 1))
    sub = ChimeraSpec(k, k)
    mapping = np.empty(sub.node_count, dtype=np.int64)
    for v in range(sub.node_count):
        r, c, side, i = sub.coords(v)
        mapping[v] = full.node_id(r0 + r, c0 + c, side, i)
    return sub, mapping


@dataclass(frozen=True)
class MinorEmbedding:
    """Chains: target node -> non-empty set of host nodes."""

    chains: Mapping[int, frozenset]

    @classmethod
    def identity(cls, n: int) -> "MinorEmbedding":
        return cls({v: frozenset([v]) for v in range(n)})

    def __len__(self) -> int:
        return len(self.chains)


def verify_minor_embedding(target: Graph, host: Graph, emb: MinorEmbedding) -> bool:
    owner: dict[int, int] = {}
    for t, chain in emb.chains.items():
        if not chain:
            return False
        for q in chain:
            if not 0 <= q < host.node_count:
                raise ValueError(f"chain of {t} references missing host node {q}")
            if q in owner:
                return False
            owner[q] = t
    if any(t not in emb.chains for t in range(target.node_count) if target.degree(t) > 0):
        return False
    for t, chain in emb.chains.items():
        chain_graph, _ = host.induced_subgraph(sorted(chain))
        if len(bfs_distances(chain_graph, 0)) != len(chain):
            return False
    covered = set()
    for a, b in host.edges:
        ta, tb = owner.get(a), owner.get(b)
        if ta is not None and tb is not None and ta != tb:
            covered.add((min(ta, tb), max(ta, tb)))
    return all(e in covered for e in target.edges)


def clique_embedding(k: int) -> MinorEmbedding:
    """Embedding of K_{4k+1} into the k x k Chimera.

    Logical node (j, i) for block j and index i is an L-shaped chain: left
    index-i nodes of column j in rows 0..j plus right index-i nodes of row j
    in columns j..k-1. Those 4k chains pairwise meet in cell (min, max). The
    strictly lower-triangular cells are unused by them and form the extra
    chain. For k = 1 the single cell is split as {L_i, R_i} (i < 3), {L_3},
    {R_3}.
    """
    spec = ChimeraSpec(k, k)
    nid = spec.node_id
    chains: dict[int, frozenset] = {}
    if k == 1:
        for i in range(3):
            chains[i] = frozenset({nid(0, 0, LEFT, i), nid(0, 0, RIGHT, i)})
        chains[3] = frozenset({nid(0, 0, LEFT, 3)})
        chains[4] = frozenset({nid(0, 0, RIGHT, 3)})
        return MinorEmbedding(chains)
    for j in range(k):
        for i in range(HALF_CELL):
            chain = {nid(r, j, LEFT, i) for r in range(j + 1)}
            chain |= {nid(j, c, RIGHT, i) for c in range(j, k)}
            chains[HALF_CELL * j + i] = frozenset(chain)
    extra = {nid(r, c, side, i) for r in range(k) for c in range(r)
             for side in (LEFT, RIGHT) for i in range(HALF_CELL)}
    chains[HALF_CELL * k] = frozenset(extra)
    return MinorEmbedding(chains)


def complete_graph_capacity(spec: ChimeraSpec) -> int:
    """Largest N whose K_N fits via :func:`clique_embedding` (4k + 1)."""
    if spec.rows != spec.cols:
        raise ValueError("complete_graph_capacity needs a square spec")
    return HALF_CELL * spec.rows + 1


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(((u, v) for u in range(n) for v in range(u + 1, n)), n)
