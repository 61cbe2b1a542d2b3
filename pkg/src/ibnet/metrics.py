"""First- and higher-order network statistics.

Every operation here strips self-loops first and, where a node count enters
a formula (density, reciprocity), counts only active nodes — nodes with at
least one non-loop incident edge. Inputs are never mutated.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path
from scipy.stats import rankdata

from .errors import DegenerateError
from .graphs import WeightedDigraph, strip_self_loops

# --------------------------------------------------------------------------
# Dense working view
# --------------------------------------------------------------------------


class DenseView:
    """Self-loop-free dense matrices restricted to active nodes.

    Shared scratch object so a batch of metrics on one graph builds the
    adjacency only once. ``W`` is the weight matrix, ``A`` its binary
    pattern, ``S`` the symmetrized pattern; all are ``n_active`` square.
    """

    def __init__(self, g: WeightedDigraph):
        g, _, _ = strip_self_loops(g)
        mask = g.active_mask()
        self.node_ids = tuple(np.asarray(g.nodes, dtype=object)[mask])
        self.n = int(mask.sum())
        remap = -np.ones(g.n, dtype=np.int64)
        remap[mask] = np.arange(self.n)
        W = np.zeros((self.n, self.n))
        for (i, j), w in g.edges.items():
            W[remap[i], remap[j]] = w
            if not g.directed and i != j:
                W[remap[j], remap[i]] = w
        self.W = W
        self.A = W > 0
        self.S = self.A | self.A.T
        self.edge_count = int(self.A.sum())

    # degree/strength vectors over active nodes
    @property
    def k_out(self) -> np.ndarray:
        return self.A.sum(axis=1)

    @property
    def k_in(self) -> np.ndarray:
        return self.A.sum(axis=0)

    @property
    def k_mutual(self) -> np.ndarray:
        return (self.A & self.A.T).sum(axis=1)

    @property
    def s_out(self) -> np.ndarray:
        return self.W.sum(axis=1)

    @property
    def s_in(self) -> np.ndarray:
        return self.W.sum(axis=0)


def _view(g: WeightedDigraph | DenseView) -> DenseView:
    return g if isinstance(g, DenseView) else DenseView(g)


# --------------------------------------------------------------------------
# Degrees and strengths
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DegreeRecord:
    node: str
    k_in: int
    k_out: int
    k_total: int
    k_mutual: int
    s_in: float
    s_out: float


class DegreeTable:
    """Per-node degrees and strengths over the full node universe.

    Self-loops are excluded everywhere; isolated nodes carry zeros.
    """

    def __init__(self, g: WeightedDigraph):
        g, _, _ = strip_self_loops(g)
        n = g.n
        self.nodes = g.nodes
        self.k_in = np.zeros(n, dtype=np.int64)
        self.k_out = np.zeros(n, dtype=np.int64)
        self.k_mutual = np.zeros(n, dtype=np.int64)
        self.s_in = np.zeros(n)
        self.s_out = np.zeros(n)
        edges = g.edges
        for (i, j), w in edges.items():
            self.k_out[i] += 1
            self.k_in[j] += 1
            self.s_out[i] += w
            self.s_in[j] += w
            if not g.directed:
                self.k_out[j] += 1
                self.k_in[i] += 1
                self.s_out[j] += w
                self.s_in[i] += w
            elif (j, i) in edges:
                self.k_mutual[i] += 1

    @property
    def k_total(self) -> np.ndarray:
        return self.k_in + self.k_out

    def records(self) -> Iterator[DegreeRecord]:
        for i, node in enumerate(self.nodes):
            yield DegreeRecord(
                node=node,
                k_in=int(self.k_in[i]),
                k_out=int(self.k_out[i]),
                k_total=int(self.k_in[i] + self.k_out[i]),
                k_mutual=int(self.k_mutual[i]),
                s_in=float(self.s_in[i]),
                s_out=float(self.s_out[i]),
            )


def degree_strength(g: WeightedDigraph) -> DegreeTable:
    return DegreeTable(g)


# --------------------------------------------------------------------------
# Connectivity
# --------------------------------------------------------------------------


def density(g: WeightedDigraph | DenseView) -> float:
    """Directed density l / (n (n-1)) over active nodes, self-loops excluded."""
    v = _view(g)
    if v.n < 2:
        raise DegenerateError(f"density undefined for {v.n} active node(s)")
    return v.edge_count / (v.n * (v.n - 1))


def components(g: WeightedDigraph | DenseView, mode: str = "weak") -> list[int]:
    """Component sizes in descending order. Weak mode symmetrizes first."""
    if mode not in ("weak", "strong"):
        raise ValueError(f"mode must be 'weak' or 'strong', got {mode!r}")
    v = _view(g)
    if v.n == 0:
        return []
    graph = csr_matrix(v.A)
    _, labels = connected_components(graph, directed=True, connection=mode)
    sizes = np.bincount(labels)
    return sorted((int(s) for s in sizes), reverse=True)


def avg_path_length(g: WeightedDigraph | DenseView, mode: str = "undirected") -> float:
    """Mean geodesic distance over ordered pairs in the largest component.

    Undirected mode measures on the symmetrized graph inside the largest
    weak component; directed mode uses directed distances inside the
    largest strong component.
    """
    if mode not in ("undirected", "directed"):
        raise ValueError(f"mode must be 'undirected' or 'directed', got {mode!r}")
    v = _view(g)
    if v.n == 0:
        raise DegenerateError("no active nodes")
    graph = csr_matrix(v.A)
    connection = "weak" if mode == "undirected" else "strong"
    _, labels = connected_components(graph, directed=True, connection=connection)
    sizes = np.bincount(labels)
    comp = int(sizes.argmax())
    members = np.flatnonzero(labels == comp)
    if len(members) < 2:
        raise DegenerateError(f"largest {connection} component has < 2 nodes")
    if mode == "undirected":
        sub = csr_matrix(v.S[np.ix_(members, members)])
        D = shortest_path(sub, method="D", directed=False, unweighted=True)
    else:
        sub = csr_matrix(v.A[np.ix_(members, members)])
        D = shortest_path(sub, method="D", directed=True, unweighted=True)
    off = ~np.eye(len(members), dtype=bool)
    finite = np.isfinite(D) & off
    return float(D[finite].mean())


# --------------------------------------------------------------------------
# Reciprocity
# --------------------------------------------------------------------------


def reciprocated_links(g: WeightedDigraph | DenseView) -> int:
    """R = 1/2 * sum_{i != j} a_ij a_ji."""
    v = _view(g)
    return int((v.A & v.A.T).sum() // 2)


def reciprocity(g: WeightedDigraph | DenseView, mode: str = "binary") -> float:
    """Correlation-style reciprocity coefficient.

    Binary mode is the correlation of A with its transpose over off-diagonal
    entries; weighted mode is the strength analogue
    rho_w = (varrho_w - wbar) / (omega - wbar) built from the same products.
    """
    if mode not in ("binary", "weighted"):
        raise ValueError(f"mode must be 'binary' or 'weighted', got {mode!r}")
    v = _view(g)
    if v.n < 2:
        raise DegenerateError("reciprocity needs at least 2 active nodes")
    off = ~np.eye(v.n, dtype=bool)
    if mode == "binary":
        a = v.A[off].astype(float)
        at = v.A.T[off].astype(float)
        abar = a.mean()
        denom = ((a - abar) ** 2).sum()
        if denom == 0:
            raise DegenerateError("adjacency has zero off-diagonal variance")
        return float(((a - abar) * (at - abar)).sum() / denom)
    w = v.W[off]
    wt = v.W.T[off]
    total = w.sum()
    if total == 0:
        raise DegenerateError("no off-diagonal weight")
    varrho = (w * wt).sum() / total
    omega = (w * w).sum() / total
    wbar = w.mean()
    if omega == wbar:
        raise DegenerateError("weight matrix has zero off-diagonal variance")
    return float((varrho - wbar) / (omega - wbar))


# --------------------------------------------------------------------------
# Assortativity and neighbor-degree curve
# --------------------------------------------------------------------------

ASSORTATIVITY_ATTRIBUTES = ("out-degree", "in-degree", "out-strength", "in-strength")


class AssortativityResult(NamedTuple):
    coefficient: float
    p_value: float | None
    n_perm: int


def _edge_attribute_pairs(v: DenseView, attribute: str) -> tuple[np.ndarray, np.ndarray]:
    vecs = {
        "out-degree": v.k_out.astype(float),
        "in-degree": v.k_in.astype(float),
        "out-strength": v.s_out,
        "in-strength": v.s_in,
    }
    try:
        x = vecs[attribute]
    except KeyError:
        raise ValueError(f"attribute must be one of {ASSORTATIVITY_ATTRIBUTES}") from None
    src, dst = np.nonzero(v.A)
    return x[src], x[dst]


def assortativity(
    g: WeightedDigraph | DenseView,
    attribute: str = "out-degree",
    n_perm: int = 1000,
    seed: int | None = None,
) -> AssortativityResult:
    """Pearson correlation of the attribute across the two ends of each edge.

    The same attribute is read on source and target (out-with-out,
    in-with-in, ...). Significance comes from a two-sided permutation test
    that shuffles the target-end values across edges; pass ``n_perm=0`` to
    skip it.
    """
    v = _view(g)
    xs, xt = _edge_attribute_pairs(v, attribute)
    if len(xs) < 2:
        raise DegenerateError("assortativity needs at least 2 edges")
    if np.ptp(xs) == 0 or np.ptp(xt) == 0:
        raise DegenerateError(f"{attribute} values are constant across edge ends")
    r = float(np.corrcoef(xs, xt)[0, 1])
    if n_perm <= 0:
        return AssortativityResult(r, None, 0)
    rng = np.random.default_rng(seed)
    hits = 0
    xt_c = xt - xt.mean()
    xs_c = xs - xs.mean()
    denom = np.sqrt((xs_c**2).sum() * (xt_c**2).sum())
    for _ in range(n_perm):
        perm = rng.permutation(len(xt_c))
        r_perm = float((xs_c * xt_c[perm]).sum() / denom)
        if abs(r_perm) >= abs(r):
            hits += 1
    p = (1 + hits) / (n_perm + 1)
    return AssortativityResult(r, p, n_perm)


def knn_curve(g: WeightedDigraph | DenseView, degree: str = "in") -> dict[int, float]:
    """Average neighbor degree as a function of a node's own degree.

    Neighbors are taken on the symmetrized pattern; the degree attribute
    (in by default, matching the usual disassortativity plot) is read on
    the directed graph. A decreasing curve signals disassortative mixing.
    """
    if degree not in ("in", "out", "total"):
        raise ValueError(f"degree must be 'in', 'out' or 'total', got {degree!r}")
    v = _view(g)
    k = {"in": v.k_in, "out": v.k_out, "total": v.k_in + v.k_out}[degree].astype(float)
    nbr_count = v.S.sum(axis=1)
    with np.errstate(invalid="ignore"):
        mean_nbr = (v.S @ k) / nbr_count
    curve_sum: dict[int, float] = {}
    curve_n: dict[int, int] = {}
    for i in range(v.n):
        if nbr_count[i] == 0:
            continue
        ki = int(k[i])
        curve_sum[ki] = curve_sum.get(ki, 0.0) + float(mean_nbr[i])
        curve_n[ki] = curve_n.get(ki, 0) + 1
    return {ki: curve_sum[ki] / curve_n[ki] for ki in sorted(curve_sum)}


# --------------------------------------------------------------------------
# Clustering and triangles
# --------------------------------------------------------------------------


class ClusteringResult(NamedTuple):
    nodes: tuple[str, ...]
    values: np.ndarray  # NaN where undefined
    average: float
    defined: int


def clustering(g: WeightedDigraph | DenseView, mode: str = "undirected") -> ClusteringResult:
    """Per-node clustering coefficients plus their average.

    Undirected mode is the standard coefficient of the symmetrization;
    directed mode uses the all-direction triangle count normalized by
    2 (k (k-1) - 2 k_mutual) with k the total directed degree. Nodes with
    an undefined denominator are NaN and excluded from the average.
    """
    if mode not in ("undirected", "directed"):
        raise ValueError(f"mode must be 'undirected' or 'directed', got {mode!r}")
    v = _view(g)
    vals = np.full(v.n, np.nan)
    if mode == "undirected":
        S = csr_matrix(v.S.astype(np.float64))
        tri2 = np.asarray((S @ S).multiply(S).sum(axis=1)).ravel()  # 2x triangles at i
        k = v.S.sum(axis=1)
        denom = k * (k - 1.0)
    else:
        B = csr_matrix(v.A.astype(np.float64) + v.A.T.astype(np.float64))
        tri2 = np.asarray((B @ B).multiply(B).sum(axis=1)).ravel()
        k = v.k_in + v.k_out
        denom = 2.0 * (k * (k - 1.0) - 2.0 * v.k_mutual)
    ok = denom > 0
    vals[ok] = tri2[ok] / denom[ok]
    if not ok.any():
        raise DegenerateError("clustering undefined for every node")
    return ClusteringResult(
        nodes=v.node_ids,
        values=vals,
        average=float(vals[ok].mean()),
        defined=int(ok.sum()),
    )


def triangles(g: WeightedDigraph | DenseView) -> int:
    """Number of undirected triangles of the symmetrized graph."""
    v = _view(g)
    S = csr_matrix(v.S.astype(np.float64))
    paths = float((S @ S).multiply(S).sum())
    return int(round(paths / 6.0))


# --------------------------------------------------------------------------
# Triad census
# --------------------------------------------------------------------------

# Bits of a triple (a, b, c): 0: a->b, 1: b->a, 2: a->c, 3: c->a, 4: b->c, 5: c->b
_TRIAD_BIT_PAIRS = ((0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1))

#: Standard triad-census names in this package's canonical class order
#: (ascending minimal 6-bit dyad code under node permutation).
TRIAD_LABELS = (
    "021D", "021C", "111U", "021U", "111D", "201",
    "030T", "120U", "030C", "120C", "120D", "210", "300",
)

#: Classes whose dyad pattern contains at least one mutual (bidirectional) dyad.
TRIAD_HAS_MUTUAL = (False, False, True, False, True, True, False, True, False, True, True, True, True)


def _build_triad_table() -> tuple[np.ndarray, tuple[int, ...]]:
    def code_of(adj):
        c = 0
        for bit, (u, w) in enumerate(_TRIAD_BIT_PAIRS):
            if adj[u][w]:
                c |= 1 << bit
        return c

    def canon(code):
        adj = [[False] * 3 for _ in range(3)]
        for bit, (u, w) in enumerate(_TRIAD_BIT_PAIRS):
            if code >> bit & 1:
                adj[u][w] = True
        return min(
            code_of([[adj[p[u]][p[w]] for w in range(3)] for u in range(3)])
            for p in itertools.permutations(range(3))
        )

    def connected(code):
        return ((code & 0b11) != 0) + ((code & 0b1100) != 0) + ((code & 0b110000) != 0) >= 2

    canon_codes = tuple(sorted({canon(c) for c in range(64) if connected(c)}))
    index = {cc: i for i, cc in enumerate(canon_codes)}
    table = np.full(64, -1, dtype=np.int64)
    for c in range(64):
        if connected(c):
            table[c] = index[canon(c)]
    return table, canon_codes


_TRIAD_TABLE, TRIAD_CANONICAL_CODES = _build_triad_table()


@dataclass(frozen=True)
class TriadCensus:
    """Counts of the 13 connected 3-node motif classes."""

    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != 13:
            raise ValueError("triad census carries exactly 13 classes")

    @property
    def total(self) -> int:
        return sum(self.counts)

    def as_dict(self) -> dict[str, int]:
        return dict(zip(TRIAD_LABELS, self.counts))

    def __getitem__(self, cls: int) -> int:
        """1-based class index, matching the documentation table."""
        return self.counts[cls - 1]


def _census_counts(A: np.ndarray) -> np.ndarray:
    """Vectorized census over connected triples of a boolean adjacency matrix.

    Enumerates, for every symmetrized edge (u, v) with u < v, the third
    nodes w adjacent to u or v, keeping each connected triple exactly once
    (w from N(v) is dropped when already in N(u); the u < w < v corner is
    assigned to the lexicographically smallest covering edge).
    """
    n = A.shape[0]
    S = A | A.T
    if n < 3 or not S.any():
        return np.zeros(13, dtype=np.int64)
    nbrs = [np.flatnonzero(S[i]) for i in range(n)]
    deg = S.sum(axis=1)
    us, vs = np.nonzero(np.triu(S, 1))
    if len(us) == 0:
        return np.zeros(13, dtype=np.int64)
    W_u = np.concatenate([nbrs[u] for u in us])
    U_u = np.repeat(us, deg[us])
    V_u = np.repeat(vs, deg[us])
    W_v = np.concatenate([nbrs[v] for v in vs])
    U_v = np.repeat(us, deg[vs])
    V_v = np.repeat(vs, deg[vs])
    keep_v = ~S[U_v, W_v]
    U = np.concatenate([U_u, U_v[keep_v]])
    V = np.concatenate([V_u, V_v[keep_v]])
    W = np.concatenate([W_u, W_v[keep_v]])
    ok = (W != U) & (W != V)
    U, V, W = U[ok], V[ok], W[ok]
    keep = (V < W) | ((U < W) & (W < V) & ~S[U, W])
    U, V, W = U[keep], V[keep], W[keep]
    code = (
        A[U, V].astype(np.int64)
        | (A[V, U].astype(np.int64) << 1)
        | (A[U, W].astype(np.int64) << 2)
        | (A[W, U].astype(np.int64) << 3)
        | (A[V, W].astype(np.int64) << 4)
        | (A[W, V].astype(np.int64) << 5)
    )
    return np.bincount(_TRIAD_TABLE[code], minlength=13)


def triad_census(g: WeightedDigraph | DenseView) -> TriadCensus:
    """Census of connected 3-node induced subgraphs into the 13 classes."""
    v = _view(g)
    counts = _census_counts(v.A)
    return TriadCensus(counts=tuple(int(c) for c in counts))


# --------------------------------------------------------------------------
# Degree-strength correlation
# --------------------------------------------------------------------------


def spearman_degree_strength(g: WeightedDigraph | DenseView, direction: str = "out") -> float:
    """Spearman rank correlation between degree and strength (same direction)."""
    if direction not in ("out", "in"):
        raise ValueError(f"direction must be 'out' or 'in', got {direction!r}")
    v = _view(g)
    if v.n < 3:
        raise DegenerateError("need at least 3 active nodes")
    k = (v.k_out if direction == "out" else v.k_in).astype(float)
    s = v.s_out if direction == "out" else v.s_in
    if np.ptp(k) == 0 or np.ptp(s) == 0:
        raise DegenerateError(f"{direction}-degree or -strength is constant")
    rk = rankdata(k)  # average ranks on ties
    rs = rankdata(s)
    return float(np.corrcoef(rk, rs)[0, 1])
