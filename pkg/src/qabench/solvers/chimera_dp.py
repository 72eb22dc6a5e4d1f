"""Exact ground states on Chimera by column-sweep dynamic programming.

Cells are processed one column at a time. The frontier is the 4 right-side
spins of every cell in the current column (the only ones coupled to the
next column), so the table has ``2^(4 * rows)`` entries. The grid is
transposed first when that makes the frontier smaller. Inside a column the
left spins are eliminated by a row-by-row chain minimisation over 16 states
per cell half.
"""

from __future__ import annotations

import numpy as np

from ..chimera import HALF_CELL, LEFT, RIGHT, ChimeraSpec, chimera_edges
from ..instances import IsingInstance
from .result import SolveResult

DEFAULT_MAX_STATES = 1 << 20

# spin value of each bit of a 4-bit half-cell state: bit 0 -> +1, bit 1 -> -1
_HALF_SPINS = np.array([[1 - 2 * ((x >> i) & 1) for i in range(HALF_CELL)] for x in range(16)],
                       dtype=float)


class FrontierTooLarge(MemoryError):
    pass


def _transpose_node(spec: ChimeraSpec, node: int, tspec: ChimeraSpec) -> int:
    r, c, side, i = spec.coords(node)
    return tspec.node_id(c, r, 1 - side, i)


def _host_problem(inst: IsingInstance, spec: ChimeraSpec, node_map):
    N = spec.node_count
    if node_map is None:
        if inst.n != N:
            raise ValueError(f"instance has n={inst.n} but Chimera has {N} nodes; pass node_map")
        node_map = np.arange(N)
    node_map = np.asarray(node_map, dtype=np.int64)
    if node_map.shape != (inst.n,) or len(set(node_map.tolist())) != inst.n:
        raise ValueError("node_map must be an injection from instance variables to Chimera nodes")
    if inst.n and (node_map.min() < 0 or node_map.max() >= N):
        raise ValueError("node_map points outside the Chimera graph")
    allowed = set(chimera_edges(spec))
    h = np.zeros(N)
    h[node_map] = inst.h
    J = {}
    for (i, j), v in inst.J.items():
        a, b = int(node_map[i]), int(node_map[j])
        key = (a, b) if a < b else (b, a)
        if key not in allowed:
            raise ValueError(f"non-Chimera coupler ({i}, {j}) -> host ({a}, {b})")
        J[key] = v
    return h, J, node_map


def _column_tables(h, J, spec: ChimeraSpec, c: int):
    """Cell cost tables cost[r][L, R] and vertical tables vert[r][Lprev, L]."""
    K = spec.rows
    nid = spec.node_id
    cost = np.zeros((K, 16, 16))
    vert = np.zeros((K, 16, 16))
    S = _HALF_SPINS
    for r in range(K):
        hl = np.array([h[nid(r, c, LEFT, i)] for i in range(HALF_CELL)])
        hr = np.array([h[nid(r, c, RIGHT, i)] for i in range(HALF_CELL)])
        W = np.array([[J.get((nid(r, c, LEFT, i), nid(r, c, RIGHT, j)), 0.0)
                       for j in range(HALF_CELL)] for i in range(HALF_CELL)])
        cost[r] = (S @ hl)[:, None] + (S @ hr)[None, :] + S @ W @ S.T
        if r > 0:
            jv = np.array([J.get((nid(r - 1, c, LEFT, i), nid(r, c, LEFT, i)), 0.0)
                           for i in range(HALF_CELL)])
            vert[r] = (S * jv) @ S.T
    return cost, vert


def _column_min(cost, vert) -> np.ndarray:
    """min over the column's left spins, as a function of its right spins.

    The flat index is ``sum_r R_r * 16^(K-1-r)``.
    """
    K = cost.shape[0]
    T = cost[0].T.copy()  # [R_0, L_0]
    for r in range(1, K):
        U = np.full(T.shape, np.inf)
        for a in range(16):
            np.minimum(U, T[:, a:a + 1] + vert[r][a][None, :], out=U)
        T = (U[:, None, :] + cost[r].T[None, :, :]).reshape(-1, 16)
    return T.min(axis=1)


def _column_argmin_left(cost, vert, R: list[int]) -> list[int]:
    """Optimal left half-states of one column for fixed right half-states."""
    K = cost.shape[0]
    val = cost[0][:, R[0]].copy()
    back = []
    for r in range(1, K):
        M = val[:, None] + vert[r]
        arg = M.argmin(axis=0)
        back.append(arg)
        val = M[arg, np.arange(16)] + cost[r][:, R[r]]
    L = [int(val.argmin())]
    for arg in reversed(back):
        L.append(int(arg[L[-1]]))
    return L[::-1]


def _horizontal(h, J, spec: ChimeraSpec, c: int) -> np.ndarray:
    """Couplers between column c-1 and c, indexed by flat bit position."""
    K = spec.rows
    nid = spec.node_id
    out = np.zeros(4 * K)
    for r in range(K):
        for i in range(HALF_CELL):
            p = HALF_CELL * (K - 1 - r) + i
            out[p] = J.get((nid(r, c - 1, RIGHT, i), nid(r, c, RIGHT, i)), 0.0)
    return out


def _minplus_bits(g: np.ndarray, jh: np.ndarray) -> np.ndarray:
    """``out(x') = min_x g(x) + sum_p jh_p s_p(x) s_p(x')``, one bit at a time."""
    nbits = len(jh)
    out = g
    for p in range(nbits):
        # a zero coupler still minimises the old bit freely
        v = out.reshape(-1, 2, 1 << p)
        a, b = v[:, 0, :], v[:, 1, :]
        w = jh[p]
        out = np.stack([np.minimum(a + w, b - w), np.minimum(a - w, b + w)], axis=1).reshape(-1)
    return out


def _flat_spins(K: int) -> np.ndarray:
    codes = np.arange(1 << (4 * K))
    return (1 - 2 * ((codes[:, None] >> np.arange(4 * K)[None, :]) & 1)).astype(np.int8)


def exact_chimera_dp(inst: IsingInstance, spec: ChimeraSpec, node_map=None,
                     max_states: int = DEFAULT_MAX_STATES) -> SolveResult:
    """Exact minimum of an instance whose couplers lie on Chimera edges.

    ``node_map[v]`` is the Chimera node hosting instance variable ``v``;
    omitted, the instance must cover the full graph in Chimera id order.
    """
    h, J, node_map = _host_problem(inst, spec, node_map)
    work = spec
    if spec.rows > spec.cols:
        work = ChimeraSpec(spec.cols, spec.rows)
        perm = np.array([_transpose_node(spec, v, work) for v in range(spec.node_count)])
        h2 = np.zeros_like(h)
        h2[perm] = h
        J = {tuple(sorted((int(perm[a]), int(perm[b])))): v for (a, b), v in J.items()}
        h = h2
        node_map = perm[node_map]
    K, C = work.rows, work.cols
    states = 1 << (4 * K)
    if states > max_states:
        need = states * 8 * (C + 18)
        raise FrontierTooLarge(
            f"frontier too large: 2^{4 * K} states, ~{need / 2**20:.0f} MiB required "
            f"(max_states={max_states})")

    tables = [_column_tables(h, J, work, c) for c in range(C)]
    g = [_column_min(*tables[0])]
    for c in range(1, C):
        g.append(_column_min(*tables[c]) + _minplus_bits(g[-1], _horizontal(h, J, work, c)))

    spins = _flat_spins(K).astype(float)
    R_flat = [0] * C
    R_flat[C - 1] = int(np.argmin(g[C - 1]))
    for c in range(C - 1, 0, -1):
        jh = _horizontal(h, J, work, c)
        H = spins @ (jh * spins[R_flat[c]])
        R_flat[c - 1] = int(np.argmin(g[c - 1] + H))

    s = np.ones(work.node_count, dtype=np.int8)
    nid = work.node_id
    for c in range(C):
        R = [(R_flat[c] >> (HALF_CELL * (K - 1 - r))) & 15 for r in range(K)]
        L = _column_argmin_left(*tables[c], R)
        for r in range(K):
            for i in range(HALF_CELL):
                s[nid(r, c, LEFT, i)] = _HALF_SPINS[L[r], i]
                s[nid(r, c, RIGHT, i)] = _HALF_SPINS[R[r], i]
    best = float(g[C - 1].min()) + inst.offset
    res = SolveResult.build(inst, s[node_map], C * states, True, "dp")
    if abs(res.best_energy - best) > 1e-7 * max(1.0, abs(best)):
        raise RuntimeError(f"DP backtrack mismatch: table {best} vs config {res.best_energy}")
    return res
