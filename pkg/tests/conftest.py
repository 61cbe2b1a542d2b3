import numpy as np
import pytest

from ibnet.graphs import WeightedDigraph


def random_digraph(
    rng: np.random.Generator,
    n: int,
    p: float,
    weighted: bool = False,
    self_loops: bool = False,
    reciprocity: float = 0.0,
) -> WeightedDigraph:
    """Random test digraph; optional weights, loops and extra reciprocity."""
    a = rng.random((n, n)) < p
    if reciprocity > 0:
        add = a & ~a.T & (rng.random((n, n)) < reciprocity)
        a = a | add.T
    if not self_loops:
        np.fill_diagonal(a, False)
    if weighted:
        w = np.where(a, np.round(rng.lognormal(1.0, 1.0, (n, n)), 6), 0.0)
        w[a & (w == 0)] = 1.0
    else:
        w = a.astype(float)
    nodes = tuple(f"v{i}" for i in range(n))
    return WeightedDigraph.from_matrix(nodes, w)


def graph_from_edges(edges, n=None, weighted=None) -> WeightedDigraph:
    """Small literal graphs: edges as (i, j) or (i, j, w) over integer nodes."""
    triples = [(e[0], e[1], e[2] if len(e) > 2 else 1.0) for e in edges]
    size = n if n is not None else (max(max(i, j) for i, j, _ in triples) + 1 if triples else 0)
    nodes = tuple(f"v{i}" for i in range(size))
    return WeightedDigraph.from_named_edges(
        nodes, [(f"v{i}", f"v{j}", w) for i, j, w in triples]
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
