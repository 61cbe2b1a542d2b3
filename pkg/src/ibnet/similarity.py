"""Pairwise layer similarity: alignment, Jaccard, cosine, significance.

Two graphs are compared by flattening them onto a common node basis —
either the union or the intersection of their active node sets — as
vectors indexed by ordered off-diagonal node pairs. Jaccard works on the
binary vectors, cosine on the weighted ones. Significance is Monte Carlo:
the observed similarity is ranked against similarities of graph pairs
drawn from a null (per-layer fitted degree ensemble, or density-matched
random digraphs).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateError, InsufficientDataError
from .graphs import WeightedDigraph, strip_self_loops
from .nullmodels import DbcmFit, fit_dbcm_graph, sample_dbcm
from .parallel import child_rng, map_samples

MEASURES = ("jaccard", "cosine")
MODES = ("union", "intersection")


@dataclass(frozen=True)
class AlignedPair:
    """Two edge vectors over one ordered node basis (off-diagonal pairs)."""

    basis: tuple[str, ...]
    mode: str
    weighted: bool
    vec_a: np.ndarray
    vec_b: np.ndarray


def _active_ids(g: WeightedDigraph) -> set[str]:
    stripped, _, _ = strip_self_loops(g)
    mask = stripped.active_mask()
    return {stripped.nodes[i] for i in np.flatnonzero(mask)}


def _edge_vector(g: WeightedDigraph, basis: tuple[str, ...], weighted: bool) -> np.ndarray:
    m = len(basis)
    pos = {v: i for i, v in enumerate(basis)}
    W = np.zeros((m, m))
    for (i, j), w in g.edges.items():
        if i == j:
            continue
        u, v = g.nodes[i], g.nodes[j]
        if u in pos and v in pos:
            W[pos[u], pos[v]] = w if weighted else 1.0
            if not g.directed:
                W[pos[v], pos[u]] = w if weighted else 1.0
    off = ~np.eye(m, dtype=bool)
    return W[off]


def align(
    ga: WeightedDigraph,
    gb: WeightedDigraph,
    mode: str = "union",
    weighted: bool = False,
) -> AlignedPair:
    """Flatten two graphs onto a shared basis of active nodes.

    Union mode keeps every node active in either graph; intersection mode
    keeps common nodes only (links to exclusive nodes drop out) and fails
    on an empty overlap.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    act_a = _active_ids(ga)
    act_b = _active_ids(gb)
    ids = act_a | act_b if mode == "union" else act_a & act_b
    if len(ids) == 0:
        raise DegenerateError(f"{mode} node basis is empty")
    basis = tuple(sorted(ids))
    return AlignedPair(
        basis=basis,
        mode=mode,
        weighted=weighted,
        vec_a=_edge_vector(ga, basis, weighted),
        vec_b=_edge_vector(gb, basis, weighted),
    )


def jaccard(pair: AlignedPair) -> float:
    """Shared links over union links: |p AND q| / |p OR q|."""
    a = pair.vec_a > 0
    b = pair.vec_b > 0
    union = int((a | b).sum())
    if union == 0:
        raise DegenerateError("both edge vectors are empty")
    return float((a & b).sum() / union)


def cosine(pair: AlignedPair) -> float:
    """Inner product over norms; in [0, 1] for nonnegative weights."""
    na = float(np.linalg.norm(pair.vec_a))
    nb = float(np.linalg.norm(pair.vec_b))
    if na == 0 or nb == 0:
        raise DegenerateError("cosine undefined against a zero vector")
    return float(pair.vec_a @ pair.vec_b / (na * nb))


def layer_similarity(
    ga: WeightedDigraph, gb: WeightedDigraph, measure: str = "jaccard", mode: str = "union"
) -> float:
    if measure not in MEASURES:
        raise ValueError(f"measure must be one of {MEASURES}, got {measure!r}")
    pair = align(ga, gb, mode=mode, weighted=measure == "cosine")
    return jaccard(pair) if measure == "jaccard" else cosine(pair)


# --------------------------------------------------------------------------
# Monte Carlo significance
# --------------------------------------------------------------------------


def _er_digraph(nodes: tuple[str, ...], p: float, rng: np.random.Generator) -> WeightedDigraph:
    n = len(nodes)
    a = rng.random((n, n)) < p
    np.fill_diagonal(a, False)
    ii, jj = np.nonzero(a)
    return WeightedDigraph._trusted(
        tuple(nodes), dict.fromkeys(zip(ii.tolist(), jj.tolist()), 1.0)
    )


def _null_pair_similarity(
    k: int,
    seed: int | None,
    spec_a,
    spec_b,
    measure: str,
    mode: str,
) -> float | None:
    rng = child_rng(seed, k)

    def draw(spec) -> WeightedDigraph:
        if isinstance(spec, DbcmFit):
            return sample_dbcm(spec, rng)
        nodes, p = spec
        return _er_digraph(nodes, p, rng)

    try:
        return layer_similarity(draw(spec_a), draw(spec_b), measure, mode)
    except DegenerateError:
        return None


def significance(
    ga: WeightedDigraph,
    gb: WeightedDigraph,
    measure: str = "jaccard",
    mode: str = "union",
    null: str = "dbcm",
    samples: int = 1000,
    seed: int | None = None,
    workers: int | None = None,
) -> float:
    """Upper-tail empirical p-value of the observed similarity.

    ``dbcm`` draws each null layer from that layer's fitted degree
    ensemble; ``density`` draws random digraphs matching each layer's
    active node set and density. p = (1 + #{sim_null >= sim_obs}) / (S + 1).
    """
    if null not in ("dbcm", "density"):
        raise ValueError(f"null must be 'dbcm' or 'density', got {null!r}")
    if samples < 100:
        raise InsufficientDataError(f"significance needs S >= 100, got {samples}")
    observed = layer_similarity(ga, gb, measure, mode)

    def null_spec(g: WeightedDigraph):
        if null == "dbcm":
            return fit_dbcm_graph(g)
        from .metrics import DenseView, density as _density

        view = DenseView(g)
        if view.n < 2:
            raise DegenerateError("density null needs at least 2 active nodes")
        return (view.node_ids, _density(view))

    worker = functools.partial(
        _null_pair_similarity,
        seed=seed,
        spec_a=null_spec(ga),
        spec_b=null_spec(gb),
        measure=measure,
        mode=mode,
    )
    sims = [s for s in map_samples(worker, samples, workers) if s is not None]
    hits = sum(1 for s in sims if s >= observed)
    return (1 + hits) / (len(sims) + 1)


@dataclass(frozen=True)
class SimilarityReport:
    label_a: str
    label_b: str
    measure: str
    mode: str
    value: float
    p_value: float | None
    null: str | None
    samples: int


@dataclass(frozen=True)
class SimilarityMatrix:
    labels: tuple[str, ...]
    reports: tuple[SimilarityReport, ...]  # lower triangle, row-major

    def value(self, a: str, b: str) -> float:
        for r in self.reports:
            if {r.label_a, r.label_b} == {a, b}:
                return r.value
        raise KeyError((a, b))


def similarity_matrix(
    items: Sequence[tuple[str, WeightedDigraph]],
    measure: str = "jaccard",
    mode: str = "union",
    null: str | None = None,
    samples: int = 1000,
    seed: int | None = None,
    workers: int | None = None,
) -> SimilarityMatrix:
    """All unordered pairs of labeled graphs, diagonal omitted.

    Pass ``null`` to attach Monte Carlo p-values (per-pair seeds derive
    from the pair's position, so the matrix is reproducible as a whole).
    """
    if len(items) < 2:
        raise InsufficientDataError("similarity matrix needs at least 2 items")
    labels = tuple(lbl for lbl, _ in items)
    if len(set(labels)) != len(labels):
        raise ValueError("item labels must be unique")
    reports = []
    pair_index = 0
    for i in range(1, len(items)):
        for j in range(i):
            la, ga = items[i]
            lb, gb = items[j]
            value = layer_similarity(ga, gb, measure, mode)
            p = None
            if null is not None:
                pair_seed = None if seed is None else int(
                    np.random.SeedSequence(entropy=seed, spawn_key=(pair_index,))
                    .generate_state(1, np.uint64)[0]
                )
                p = significance(
                    ga, gb, measure, mode, null=null,
                    samples=samples, seed=pair_seed, workers=workers,
                )
            reports.append(
                SimilarityReport(la, lb, measure, mode, value, p, null, samples if null else 0)
            )
            pair_index += 1
    return SimilarityMatrix(labels=labels, reports=tuple(reports))
