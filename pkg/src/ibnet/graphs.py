"""Core data model: directed weighted graphs, multiplex layers, group maps.

Graphs are sparse (edge dict keyed by node-index pairs) and immutable by
convention: every operation returns a new object. Node universes are ordered
tuples of string identifiers; a Multiplex forces all its layers onto one
shared universe so layer vectors and aggregates align entrywise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import SchemaError

NodeId = str


@dataclass(frozen=True)
class EdgeRecord:
    """One edge-list row: lender -> borrower exposure in millions of EUR."""

    period: str
    layer: str
    lender: NodeId
    borrower: NodeId
    weight: float


class WeightedDigraph:
    """Sparse directed graph with positive real edge weights.

    ``edges`` maps node-index pairs ``(i, j)`` to weights > 0. Self-loops
    (``i == j``) are allowed and tracked; metrics strip them on demand.
    An undirected graph stores each edge once with ``i <= j`` and
    ``directed=False``.
    """

    __slots__ = ("nodes", "edges", "directed", "_index")

    def __init__(
        self,
        nodes: Sequence[NodeId],
        edges: Mapping[tuple[int, int], float],
        directed: bool = True,
    ):
        nodes = tuple(nodes)
        n = len(nodes)
        clean: dict[tuple[int, int], float] = {}
        for (i, j), w in edges.items():
            if not (0 <= i < n and 0 <= j < n):
                raise SchemaError(f"edge ({i},{j}) outside node universe of size {n}")
            if w < 0:
                raise SchemaError(f"negative weight {w} on edge ({i},{j})")
            if w == 0:
                continue
            if not directed and i > j:
                i, j = j, i
            clean[(i, j)] = clean.get((i, j), 0.0) + float(w)
        self.nodes = nodes
        self.edges = clean
        self.directed = directed
        self._index: dict[NodeId, int] | None = None

    # -- basic accessors ----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.nodes)

    def index(self, node: NodeId) -> int:
        if self._index is None:
            self._index = {v: i for i, v in enumerate(self.nodes)}
        return self._index[node]

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def self_loop_count(self) -> int:
        return sum(1 for (i, j) in self.edges if i == j)

    @property
    def self_loop_weight(self) -> float:
        return sum(w for (i, j), w in self.edges.items() if i == j)

    @property
    def total_weight(self) -> float:
        return float(sum(self.edges.values()))

    def is_binary(self) -> bool:
        return all(w == 1.0 for w in self.edges.values())

    def active_mask(self, include_self_loops: bool = True) -> np.ndarray:
        """Boolean mask over the universe: node has at least one incident edge."""
        mask = np.zeros(self.n, dtype=bool)
        for (i, j) in self.edges:
            if i == j and not include_self_loops:
                continue
            mask[i] = True
            mask[j] = True
        return mask

    def active_node_count(self, include_self_loops: bool = True) -> int:
        return int(self.active_mask(include_self_loops).sum())

    def weight_matrix(self) -> np.ndarray:
        W = np.zeros((self.n, self.n))
        for (i, j), w in self.edges.items():
            W[i, j] = w
            if not self.directed and i != j:
                W[j, i] = w
        return W

    def iter_edges(self) -> Iterator[tuple[NodeId, NodeId, float]]:
        for (i, j), w in sorted(self.edges.items()):
            yield self.nodes[i], self.nodes[j], w

    # -- constructors ---------------------------------------------------------

    @classmethod
    def _trusted(
        cls,
        nodes: tuple[NodeId, ...],
        edges: dict[tuple[int, int], float],
        directed: bool = True,
    ) -> "WeightedDigraph":
        """Skip validation for edges a sampler already guarantees valid."""
        g = cls.__new__(cls)
        g.nodes = nodes
        g.edges = edges
        g.directed = directed
        g._index = None
        return g

    @classmethod
    def from_named_edges(
        cls,
        nodes: Sequence[NodeId],
        edges: Iterable[tuple[NodeId, NodeId, float]],
        directed: bool = True,
    ) -> "WeightedDigraph":
        idx = {v: i for i, v in enumerate(nodes)}
        acc: dict[tuple[int, int], float] = {}
        for u, v, w in edges:
            key = (idx[u], idx[v])
            acc[key] = acc.get(key, 0.0) + float(w)
        return cls(nodes, acc, directed)

    @classmethod
    def from_matrix(
        cls, nodes: Sequence[NodeId], W: np.ndarray, directed: bool = True
    ) -> "WeightedDigraph":
        W = np.asarray(W, dtype=float)
        ii, jj = np.nonzero(W)
        if not directed:
            keep = ii <= jj
            ii, jj = ii[keep], jj[keep]
        return cls(nodes, {(int(i), int(j)): float(W[i, j]) for i, j in zip(ii, jj)}, directed)

    # -- equality (used heavily in tests) --------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedDigraph):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and self.directed == other.directed
            and self.edges == other.edges
        )

    def __hash__(self):  # pragma: no cover - graphs are not meant to be dict keys
        return hash((self.nodes, self.directed, frozenset(self.edges.items())))

    def __repr__(self) -> str:
        kind = "digraph" if self.directed else "graph"
        return f"<{kind} n={self.n} edges={self.edge_count} loops={self.self_loop_count}>"

    def __getstate__(self):
        return (self.nodes, self.edges, self.directed)

    def __setstate__(self, state):
        nodes, edges, directed = state
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "directed", directed)
        object.__setattr__(self, "_index", None)


@dataclass(frozen=True)
class Multiplex:
    """Named layers over one shared, ordered node universe."""

    period: str
    layers: dict[str, WeightedDigraph] = field(default_factory=dict)

    def __post_init__(self):
        universes = {g.nodes for g in self.layers.values()}
        if len(universes) > 1:
            raise SchemaError("all layers of a multiplex must share one node universe")

    @property
    def nodes(self) -> tuple[NodeId, ...]:
        for g in self.layers.values():
            return g.nodes
        return ()

    @property
    def layer_names(self) -> tuple[str, ...]:
        return tuple(self.layers)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Multiplex):
            return NotImplemented
        return self.period == other.period and self.layers == other.layers


class GroupMap:
    """Total mapping bank id -> banking-group id."""

    def __init__(self, mapping: Mapping[NodeId, NodeId]):
        self.mapping = dict(mapping)

    def group_of(self, bank: NodeId) -> NodeId:
        try:
            return self.mapping[bank]
        except KeyError:
            raise SchemaError(f"node {bank!r} has no group mapping") from None

    @property
    def groups(self) -> tuple[NodeId, ...]:
        return tuple(sorted(set(self.mapping.values())))


# --------------------------------------------------------------------------
# Operations
# --------------------------------------------------------------------------


def consolidate(m: Multiplex, groups: GroupMap) -> Multiplex:
    """Relabel banks to groups; intra-group edges become self-loops.

    Parallel edges created by the relabeling sum their weights, so total
    weight per layer is preserved exactly (self-loops included).
    """
    for node in m.nodes:
        groups.group_of(node)  # raises SchemaError naming the node
    new_nodes = tuple(sorted({groups.group_of(v) for v in m.nodes}))
    gidx = {g: i for i, g in enumerate(new_nodes)}
    new_layers = {}
    for name, g in m.layers.items():
        acc: dict[tuple[int, int], float] = {}
        for (i, j), w in g.edges.items():
            key = (gidx[groups.group_of(g.nodes[i])], gidx[groups.group_of(g.nodes[j])])
            acc[key] = acc.get(key, 0.0) + w
        new_layers[name] = WeightedDigraph(new_nodes, acc, directed=g.directed)
    return Multiplex(period=m.period, layers=new_layers)


def aggregate_layers(m: Multiplex, layers: Iterable[str] | None = None) -> WeightedDigraph:
    """Entrywise sum of the selected layers' weight matrices."""
    names = list(m.layers) if layers is None else list(layers)
    for name in names:
        if name not in m.layers:
            raise SchemaError(f"unknown layer {name!r}; have {sorted(m.layers)}")
    acc: dict[tuple[int, int], float] = {}
    for name in names:
        for key, w in m.layers[name].edges.items():
            acc[key] = acc.get(key, 0.0) + w
    return WeightedDigraph(m.nodes, acc, directed=True)


def project_binary(g: WeightedDigraph) -> WeightedDigraph:
    """Every positive weight becomes 1; edge set unchanged."""
    return WeightedDigraph(g.nodes, {k: 1.0 for k in g.edges}, directed=g.directed)


def symmetrize(g: WeightedDigraph) -> WeightedDigraph:
    """Undirected binary projection: {i,j} present iff i->j or j->i; loops dropped."""
    und = {(min(i, j), max(i, j)): 1.0 for (i, j) in g.edges if i != j}
    return WeightedDigraph(g.nodes, und, directed=False)


def strip_self_loops(g: WeightedDigraph) -> tuple[WeightedDigraph, int, float]:
    """Remove all (i, i) edges; returns (graph, count removed, weight removed)."""
    kept = {}
    count = 0
    weight = 0.0
    for (i, j), w in g.edges.items():
        if i == j:
            count += 1
            weight += w
        else:
            kept[(i, j)] = w
    if count == 0:
        return g, 0, 0.0
    return WeightedDigraph(g.nodes, kept, directed=g.directed), count, weight
