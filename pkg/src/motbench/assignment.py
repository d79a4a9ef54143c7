"""Optimal bipartite assignment with forbidden pairs.

The objective is lexicographic: first the largest number of matched pairs
among allowed cells, then the smallest total cost, then the smallest
assignment vector (row ``r`` maps to its column, unmatched rows compare as
larger than any column) so results are fully deterministic.

Forbidden cells are marked with ``FORBIDDEN`` (``np.inf``) in the cost
matrix.
"""

from __future__ import annotations

import itertools
from collections import deque

import numpy as np
from scipy.optimize import linear_sum_assignment

FORBIDDEN = np.inf
COST_TOL = 1e-9


def _as_cost(cost) -> np.ndarray:
    c = np.array(cost, dtype=float)
    if c.size == 0:
        return c.reshape(c.shape if c.ndim == 2 else (0, 0))
    if c.ndim != 2:
        raise ValueError(f"cost matrix must be 2-D, got shape {c.shape}")
    if np.isnan(c).any():
        raise ValueError("cost matrix contains NaN")
    finite = np.isfinite(c)
    if (c[finite] < 0).any():
        raise ValueError("finite costs must be non-negative")
    return c


def _tol(value: float) -> float:
    return COST_TOL * max(1.0, abs(value))


def _solve_min(c: np.ndarray) -> tuple[int, float, list[tuple[int, int]]]:
    """Max-cardinality, min-cost matching via a big-M dense assignment."""
    n, m = c.shape
    feasible = np.isfinite(c)
    if n == 0 or m == 0 or not feasible.any():
        return 0, 0.0, []
    big = min(n, m) * float(c[feasible].max()) + 1.0
    dense = np.where(feasible, c, big)
    rows, cols = linear_sum_assignment(dense)
    pairs = [(int(r), int(k)) for r, k in zip(rows, cols) if feasible[r, k]]
    return len(pairs), float(sum(c[r, k] for r, k in pairs)), pairs


def _components(feasible: np.ndarray) -> list[tuple[list[int], list[int]]]:
    n, m = feasible.shape
    seen_r = [False] * n
    seen_c = [False] * m
    out = []
    for start in range(n):
        if seen_r[start] or not feasible[start].any():
            continue
        rows, cols = [], []
        queue = deque([("r", start)])
        seen_r[start] = True
        while queue:
            side, idx = queue.popleft()
            if side == "r":
                rows.append(idx)
                for k in np.flatnonzero(feasible[idx]):
                    if not seen_c[k]:
                        seen_c[k] = True
                        queue.append(("c", int(k)))
            else:
                cols.append(idx)
                for r in np.flatnonzero(feasible[:, idx]):
                    if not seen_r[r]:
                        seen_r[r] = True
                        queue.append(("r", int(r)))
        out.append((sorted(rows), sorted(cols)))
    return out


def _lex_refine(c: np.ndarray) -> list[tuple[int, int]]:
    """Pick the lexicographically smallest optimal matching of one component."""
    n, m = c.shape
    best_card, best_cost, pairs = _solve_min(c)
    if n == 1 or m == 1:
        # a single pair; the cheapest one with the lowest index wins
        if n == 1:
            row = c[0]
            k = int(np.flatnonzero(row <= row.min() + _tol(row.min()))[0])
            return [(0, k)]
        col = c[:, 0]
        r = int(np.flatnonzero(col <= col.min() + _tol(col.min()))[0])
        return [(r, 0)]

    fixed: list[tuple[int, int]] = []
    fixed_cost = 0.0
    free_rows = list(range(n))
    free_cols = list(range(m))
    for r in range(n):
        free_rows.remove(r)
        chosen = None
        for k in np.flatnonzero(np.isfinite(c[r])):
            if k not in free_cols:
                continue
            rest_cols = [j for j in free_cols if j != k]
            sub = c[np.ix_(free_rows, rest_cols)]
            card, cost, _ = _solve_min(sub)
            total = fixed_cost + c[r, k] + cost
            if len(fixed) + 1 + card == best_card and total <= best_cost + _tol(best_cost):
                chosen = int(k)
                break
        if chosen is not None:
            fixed.append((r, chosen))
            fixed_cost += c[r, chosen]
            free_cols.remove(chosen)
        if len(fixed) == best_card:
            break
    return fixed


def solve_assignment(cost) -> list[tuple[int, int]]:
    """Optimal matching of rows to columns, as ``(row, col)`` pairs sorted by row.

    Every returned pair is an allowed (finite) cell. Among all matchings the
    result has maximum size, then minimum total cost, with remaining ties
    broken towards the smallest column for the earliest row.
    """
    c = _as_cost(cost)
    if c.size == 0:
        return []
    feasible = np.isfinite(c)
    result = []
    for rows, cols in _components(feasible):
        sub = c[np.ix_(rows, cols)]
        for r, k in _lex_refine(sub):
            result.append((rows[r], cols[k]))
    return sorted(result)


def brute_force_assignment(cost) -> list[tuple[int, int]]:
    """Exhaustive reference for :func:`solve_assignment` (small matrices only).

    Enumerates every injective map from the shorter side into the longer
    one; each optimal partial matching is contained in one of them.
    """
    c = _as_cost(cost)
    if c.size == 0:
        return []
    n, m = c.shape
    if n <= m:
        perms = np.array(list(itertools.permutations(range(m), n)), dtype=int).reshape(-1, n)
        vals = c[np.arange(n), perms]
        ok = np.isfinite(vals)
        vectors = np.where(ok, perms, m)
    else:
        perms = np.array(list(itertools.permutations(range(n), m)), dtype=int).reshape(-1, m)
        vals = c[perms, np.arange(m)]
        ok = np.isfinite(vals)
        vectors = np.full((len(perms), n), m)
        for k in range(m):
            hit = ok[:, k]
            vectors[np.flatnonzero(hit), perms[hit, k]] = k
    card = ok.sum(axis=1)
    total = np.where(ok, vals, 0.0).sum(axis=1)
    cand = card == card.max()
    low = total[cand].min()
    cand &= total <= low + _tol(low)
    idx = np.flatnonzero(cand)
    order = np.lexsort(vectors[idx].T[::-1])
    best = vectors[idx[order[0]]]
    return [(r, int(k)) for r, k in enumerate(best) if k < m]


def matching_cost(cost, pairs) -> float:
    c = np.asarray(cost, dtype=float)
    return float(sum(c[r, k] for r, k in pairs))
