"""Exhaustive oracle over all 2^n configurations (Gray-code order)."""

from __future__ import annotations

import numba
import numpy as np

from ..instances import IsingInstance
from .result import SolveResult

ORACLE_LIMIT = 26
TIE_TOL = 1e-9


def csr_neighbors(inst: IsingInstance) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    ptr = np.zeros(inst.n + 1, dtype=np.int64)
    idx_parts, val_parts = [], []
    for i, (nb, vals) in enumerate(inst.neighbors):
        ptr[i + 1] = ptr[i] + len(nb)
        idx_parts.append(nb)
        val_parts.append(vals)
    idx = np.concatenate(idx_parts) if idx_parts else np.zeros(0, np.int64)
    val = np.concatenate(val_parts) if val_parts else np.zeros(0)
    return ptr, idx.astype(np.int64), val.astype(np.float64)


@numba.njit(cache=True)
def _gray_enumerate(h, ptr, idx, val, n, tol):
    # code bit (n-1-i) set <=> s_i = +1; start from all -1 (code 0)
    s = -np.ones(n, dtype=np.int64)
    field = h.copy()
    for i in range(n):
        for p in range(ptr[i], ptr[i + 1]):
            field[i] += val[p] * s[idx[p]]
    e = 0.0
    for i in range(n):
        e += h[i] * s[i]
        for p in range(ptr[i], ptr[i + 1]):
            if idx[p] > i:
                e += val[p] * s[i] * s[idx[p]]
    best_e = e
    best_code = 0
    count = 1
    code = 0
    total = 1 << n
    for t in range(1, total):
        # flip bit = trailing zeros of t
        b = 0
        tt = t
        while (tt & 1) == 0:
            tt >>= 1
            b += 1
        i = n - 1 - b
        e -= 2.0 * s[i] * field[i]
        s[i] = -s[i]
        code ^= 1 << b
        for p in range(ptr[i], ptr[i + 1]):
            field[idx[p]] += 2.0 * val[p] * s[i]
        if e < best_e - tol:
            best_e = e
            best_code = code
            count = 1
        elif e <= best_e + tol:
            count += 1
            if code < best_code:
                best_code = code
    return best_e, best_code, count


def brute_force(inst: IsingInstance) -> SolveResult:
    """Exact minimum by full enumeration.

    Among degenerate optima the lexicographically smallest configuration
    under the order -1 < +1 is returned, with the ground-state degeneracy.
    """
    n = inst.n
    if n > ORACLE_LIMIT:
        raise ValueError(f"oracle size limit: n={n} > {ORACLE_LIMIT}")
    if n == 0:
        return SolveResult(np.zeros(0, np.int8), inst.offset, 1, True, "brute", degeneracy=1)
    ptr, idx, val = csr_neighbors(inst)
    _, code, count = _gray_enumerate(inst.h.astype(np.float64), ptr, idx, val, n, TIE_TOL)
    cfg = np.array([1 if (code >> (n - 1 - i)) & 1 else -1 for i in range(n)], dtype=np.int8)
    return SolveResult.build(inst, cfg, 1 << n, True, "brute", degeneracy=int(count))


def energy_spectrum(inst: IsingInstance) -> np.ndarray:
    """All 2^n energies in lexicographic order (-1 < +1); small n only."""
    n = inst.n
    if n > 20:
        raise ValueError("spectrum only for n <= 20")
    codes = np.arange(1 << n)
    S = np.where((codes[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1, 1.0, -1.0)
    return S @ inst.h + 0.5 * np.sum((S @ inst.J_matrix) * S, axis=1) + inst.offset
