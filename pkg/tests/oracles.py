"""Dense brute-force reference implementations.

Everything here works directly on a dense weight matrix with explicit
loops over node pairs/triples — no shared code with the package's
vectorized/sparse paths. Meant for small n (exhaustive checks).
"""

from __future__ import annotations

import itertools

import numpy as np


def active_submatrix(W: np.ndarray) -> np.ndarray:
    """Drop self-loops, then drop nodes with no incident edge."""
    W = W.copy().astype(float)
    np.fill_diagonal(W, 0.0)
    keep = [i for i in range(W.shape[0]) if W[i, :].any() or W[:, i].any()]
    return W[np.ix_(keep, keep)]


def oracle_density(W: np.ndarray) -> float:
    M = active_submatrix(W)
    n = M.shape[0]
    assert n >= 2
    l = int((M > 0).sum())
    return l / (n * (n - 1))


def oracle_reciprocated_links(W: np.ndarray) -> int:
    A = (W > 0).astype(int)
    n = A.shape[0]
    total = 0
    for i in range(n):
        for j in range(n):
            if i != j:
                total += A[i, j] * A[j, i]
    return total // 2


def oracle_reciprocity_binary(W: np.ndarray) -> float | None:
    """None where the coefficient is undefined (zero variance)."""
    M = active_submatrix(W)
    n = M.shape[0]
    if n < 2:
        return None
    A = (M > 0).astype(float)
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    abar = sum(A[i, j] for i, j in pairs) / len(pairs)
    num = sum((A[i, j] - abar) * (A[j, i] - abar) for i, j in pairs)
    den = sum((A[i, j] - abar) ** 2 for i, j in pairs)
    if den == 0:
        return None
    return num / den


def oracle_reciprocity_weighted(W: np.ndarray) -> float | None:
    M = active_submatrix(W)
    n = M.shape[0]
    if n < 2:
        return None
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    tot = sum(M[i, j] for i, j in pairs)
    if tot == 0:
        return None
    varrho = sum(M[i, j] * M[j, i] for i, j in pairs) / tot
    omega = sum(M[i, j] ** 2 for i, j in pairs) / tot
    wbar = tot / len(pairs)
    if omega == wbar:
        return None
    return (varrho - wbar) / (omega - wbar)


def _sym(A: np.ndarray) -> np.ndarray:
    A = (A > 0).astype(int)
    S = A + A.T - A * A.T
    np.fill_diagonal(S, 0)
    return S


def oracle_triangles(W: np.ndarray) -> int:
    A = (W > 0).astype(int)
    np.fill_diagonal(A, 0)
    S = _sym(A)
    n = S.shape[0]
    count = 0
    for i, j, k in itertools.combinations(range(n), 3):
        if S[i, j] and S[j, k] and S[i, k]:
            count += 1
    return count


def oracle_ucc(W: np.ndarray) -> list[float | None]:
    """Per-node undirected clustering on the original node order (loops dropped)."""
    A = (W > 0).astype(int)
    np.fill_diagonal(A, 0)
    S = _sym(A)
    n = S.shape[0]
    out: list[float | None] = []
    for i in range(n):
        k = int(S[i].sum())
        if k < 2:
            out.append(None)
            continue
        num = 0
        for j in range(n):
            for h in range(n):
                if j != h:
                    num += S[i, j] * S[j, h] * S[i, h]
        out.append(num / (k * (k - 1)))
    return out


def oracle_dcc(W: np.ndarray) -> list[float | None]:
    A = (W > 0).astype(int)
    np.fill_diagonal(A, 0)
    n = A.shape[0]
    out: list[float | None] = []
    for i in range(n):
        k = int(A[i].sum() + A[:, i].sum())
        k_mut = int(sum(A[i, j] * A[j, i] for j in range(n)))
        den = 2 * (k * (k - 1) - 2 * k_mut)
        if den <= 0:
            out.append(None)
            continue
        num = 0
        for j in range(n):
            for h in range(n):
                if j != h:
                    num += (A[i, j] + A[j, i]) * (A[i, h] + A[h, i]) * (A[j, h] + A[h, j])
        out.append(num / den)
    return out


# --- triad census ----------------------------------------------------------

_PERMS = list(itertools.permutations(range(3)))


def _triple_code(A: np.ndarray, i: int, j: int, k: int) -> int:
    trio = (i, j, k)
    code = 0
    bit = 0
    for a, b in ((0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)):
        if A[trio[a], trio[b]]:
            code |= 1 << bit
        bit += 1
    return code


def _canonical_code(A: np.ndarray, i: int, j: int, k: int) -> int:
    trio = (i, j, k)
    best = 63
    for perm in _PERMS:
        t = (trio[perm[0]], trio[perm[1]], trio[perm[2]])
        best = min(best, _triple_code(A, *t))
    return best


def oracle_census_classes() -> list[int]:
    """The 13 canonical codes, ascending (recomputed from scratch)."""
    codes = set()
    for code in range(64):
        dyads = ((code & 0b11) != 0) + ((code & 0b1100) != 0) + ((code & 0b110000) != 0)
        if dyads < 2:
            continue
        A = np.zeros((3, 3), dtype=int)
        bit = 0
        for a, b in ((0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)):
            A[a, b] = (code >> bit) & 1
            bit += 1
        codes.add(_canonical_code(A, 0, 1, 2))
    return sorted(codes)


_CLASS_CODES = oracle_census_classes()


def oracle_triad_census(W: np.ndarray) -> list[int]:
    """Census over all C(n,3) triples of the dense matrix."""
    A = (W > 0).astype(int)
    np.fill_diagonal(A, 0)
    n = A.shape[0]
    counts = [0] * 13
    for i, j, k in itertools.combinations(range(n), 3):
        dyads = (
            (A[i, j] or A[j, i]) + (A[i, k] or A[k, i]) + (A[j, k] or A[k, j])
        )
        if dyads < 2:
            continue
        counts[_CLASS_CODES.index(_canonical_code(A, i, j, k))] += 1
    return counts


def oracle_connected_triples(W: np.ndarray) -> int:
    """Number of triples whose induced subgraph is weakly connected (BFS check)."""
    A = (W > 0).astype(int)
    np.fill_diagonal(A, 0)
    n = A.shape[0]
    S = _sym(A)
    count = 0
    for trio in itertools.combinations(range(n), 3):
        # BFS on the induced symmetrized subgraph
        seen = {trio[0]}
        frontier = [trio[0]]
        while frontier:
            u = frontier.pop()
            for v in trio:
                if v not in seen and S[u, v]:
                    seen.add(v)
                    frontier.append(v)
        if len(seen) == 3:
            count += 1
    return count


# --- distances / components -------------------------------------------------


def oracle_components(W: np.ndarray, mode: str) -> list[int]:
    """Flood fill over active nodes; sizes descending."""
    M = active_submatrix(W)
    A = (M > 0).astype(int)
    n = A.shape[0]
    if mode == "weak":
        S = _sym(A)
        reach = lambda u, v: S[u, v] > 0
        sizes = []
        unseen = set(range(n))
        while unseen:
            start = min(unseen)
            comp = {start}
            frontier = [start]
            while frontier:
                u = frontier.pop()
                for v in range(n):
                    if v not in comp and reach(u, v):
                        comp.add(v)
                        frontier.append(v)
            sizes.append(len(comp))
            unseen -= comp
        return sorted(sizes, reverse=True)
    # strong: mutual reachability via per-node BFS
    reach_sets = []
    for s in range(n):
        seen = {s}
        frontier = [s]
        while frontier:
            u = frontier.pop()
            for v in range(n):
                if A[u, v] and v not in seen:
                    seen.add(v)
                    frontier.append(v)
        reach_sets.append(seen)
    labels = [-1] * n
    comp_id = 0
    for i in range(n):
        if labels[i] >= 0:
            continue
        for j in range(n):
            if labels[j] < 0 and j in reach_sets[i] and i in reach_sets[j]:
                labels[j] = comp_id
        comp_id += 1
    sizes = [labels.count(c) for c in range(comp_id)]
    return sorted(sizes, reverse=True)


def oracle_avg_path_length(W: np.ndarray, mode: str) -> float | None:
    """Mean BFS distance over ordered pairs in the largest component."""
    M = active_submatrix(W)
    A = (M > 0).astype(int)
    n = A.shape[0]
    if n == 0:
        return None
    adj = _sym(A) if mode == "undirected" else A
    comp_mode = "weak" if mode == "undirected" else "strong"
    # find members of the largest component
    sizes = oracle_components(M, comp_mode)
    if not sizes or sizes[0] < 2:
        return None
    # recompute labels the slow way
    best_members: list[int] | None = None
    if comp_mode == "weak":
        S = _sym(A)
        unseen = set(range(n))
        comps = []
        while unseen:
            start = min(unseen)
            comp = {start}
            frontier = [start]
            while frontier:
                u = frontier.pop()
                for v in range(n):
                    if v not in comp and S[u, v]:
                        comp.add(v)
                        frontier.append(v)
            comps.append(sorted(comp))
            unseen -= comp
    else:
        reach_sets = []
        for s in range(n):
            seen = {s}
            frontier = [s]
            while frontier:
                u = frontier.pop()
                for v in range(n):
                    if A[u, v] and v not in seen:
                        seen.add(v)
                        frontier.append(v)
            reach_sets.append(seen)
        assigned = [False] * n
        comps = []
        for i in range(n):
            if assigned[i]:
                continue
            comp = [j for j in range(n) if not assigned[j] and j in reach_sets[i] and i in reach_sets[j]]
            for j in comp:
                assigned[j] = True
            comps.append(sorted(comp))
    best_members = max(comps, key=len)
    dists = []
    for s in best_members:
        dist = {s: 0}
        frontier = [s]
        while frontier:
            nxt = []
            for u in frontier:
                for v in best_members:
                    if adj[u, v] and v not in dist:
                        dist[v] = dist[u] + 1
                        nxt.append(v)
            frontier = nxt
        for t in best_members:
            if t != s and t in dist:
                dists.append(dist[t])
    return float(np.mean(dists)) if dists else None
