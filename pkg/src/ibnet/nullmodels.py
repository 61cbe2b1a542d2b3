"""Maximum-entropy ensembles and microcanonical randomizers.

Two canonical ensembles are fit by constraint solvers:

* the binary configuration model (expected in/out degree of every node
  preserved; independent Bernoulli links with Fermi-form probabilities
  ``p_ij = x_i y_j / (1 + x_i y_j)``), and
* its weighted extension (expected in/out strength preserved on top of the
  binary topology; link weights Bernoulli(p_ij) x Poisson(lambda_ij) with
  ``lambda_ij`` a product of per-node strength fitnesses).

Motif statistics use microcanonical switching instead: repeated two-edge
swaps that preserve each node's in/out degree exactly, optionally also its
number of mutual links (swapping mutual pairs only against mutual pairs
and single links only against single links).
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import metrics as _metrics
from .errors import (
    ConvergenceError,
    DegenerateError,
    InfeasibleError,
    InsufficientDataError,
)
from .graphs import WeightedDigraph, project_binary, strip_self_loops
from .metrics import DenseView, TRIAD_LABELS
from .parallel import child_rng, map_samples

# --------------------------------------------------------------------------
# Directed binary configuration model
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DbcmFit:
    """Fitted degree-constrained ensemble.

    ``x_out`` / ``x_in`` are the per-node fitness values (exp of minus the
    Lagrange multipliers); ``forced`` marks boundary pairs whose probability
    is pinned to 1 because a node's target degree equals its number of
    eligible partners.
    """

    nodes: tuple[str, ...]
    k_out: np.ndarray
    k_in: np.ndarray
    x_out: np.ndarray
    x_in: np.ndarray
    forced: np.ndarray | None
    residual: float
    iterations: int
    tol: float

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def theta_out(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return -np.log(self.x_out)

    @property
    def theta_in(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return -np.log(self.x_in)

    def link_probabilities(self) -> np.ndarray:
        """Dense matrix of p_ij, zero diagonal. Cached; treat as read-only."""
        cached = getattr(self, "_p_cache", None)
        if cached is not None:
            return cached
        xy = np.outer(self.x_out, self.x_in)
        with np.errstate(invalid="ignore"):
            p = xy / (1.0 + xy)
        p = np.nan_to_num(p, nan=0.0)
        if self.forced is not None:
            p[self.forced] = 1.0
        np.fill_diagonal(p, 0.0)
        p.setflags(write=False)
        object.__setattr__(self, "_p_cache", p)
        return p

    def to_json(self) -> str:
        payload = {
            "model": "dbcm",
            "nodes": list(self.nodes),
            "k_out": self.k_out.tolist(),
            "k_in": self.k_in.tolist(),
            "x_out": self.x_out.tolist(),
            "x_in": self.x_in.tolist(),
            "forced_pairs": (
                [[int(i), int(j)] for i, j in zip(*np.nonzero(self.forced))]
                if self.forced is not None
                else []
            ),
            "residual": self.residual,
            "iterations": self.iterations,
            "tol": self.tol,
        }
        return json.dumps(payload, sort_keys=True)


def _check_sequences(k_out: np.ndarray, k_in: np.ndarray) -> None:
    n = len(k_out)
    if len(k_in) != n:
        raise InfeasibleError("in- and out-degree sequences differ in length")
    if np.any(k_out < 0) or np.any(k_in < 0):
        raise InfeasibleError("degree sequences must be nonnegative")
    if abs(k_out.sum() - k_in.sum()) > 1e-9 * max(1.0, k_out.sum()):
        raise InfeasibleError(
            f"sum of out-degrees ({k_out.sum()}) != sum of in-degrees ({k_in.sum()})"
        )
    if np.any(k_out > n - 1) or np.any(k_in > n - 1):
        raise InfeasibleError("a degree exceeds n-1; no loop-free configuration exists")


def _pin_saturated(k_out: np.ndarray, k_in: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Boundary pre-pass: pin p_ij = 1 where constraints force certain links.

    Returns (forced matrix, residual out-capacity, residual in-capacity).
    A row is saturated when its remaining capacity equals its number of
    still-open partners; the Fermi form reaches such targets only in the
    limit of a diverging multiplier, so the pass makes them exact.
    """
    n = len(k_out)
    forced = np.zeros((n, n), dtype=bool)
    r_out = k_out.astype(float).copy()
    r_in = k_in.astype(float).copy()
    eye = np.eye(n, dtype=bool)
    while True:
        open_pair = ~forced & ~eye & (r_out[:, None] > 0) & (r_in[None, :] > 0)
        n_row = open_pair.sum(axis=1)
        n_col = open_pair.sum(axis=0)
        if np.any(r_out - n_row > 1e-9) or np.any(r_in - n_col > 1e-9):
            raise InfeasibleError("degree sequence exceeds available partners")
        sat_rows = np.flatnonzero((r_out > 0) & (np.abs(r_out - n_row) <= 1e-12))
        sat_cols = np.flatnonzero((r_in > 0) & (np.abs(r_in - n_col) <= 1e-12))
        if len(sat_rows) == 0 and len(sat_cols) == 0:
            return forced, r_out, r_in
        for i in sat_rows:
            js = np.flatnonzero(open_pair[i])
            forced[i, js] = True
            r_out[i] = 0.0
            r_in[js] -= 1.0
        open_pair = ~forced & ~eye & (r_out[:, None] > 0) & (r_in[None, :] > 0)
        for j in sat_cols:
            is_ = np.flatnonzero(open_pair[:, j])
            forced[is_, j] = True
            r_in[j] = 0.0
            r_out[is_] -= 1.0
        if np.any(r_in < -1e-9) or np.any(r_out < -1e-9):
            raise InfeasibleError("degree sequence exceeds available partners")
        r_out = np.maximum(r_out, 0.0)
        r_in = np.maximum(r_in, 0.0)


def fit_dbcm(
    k_in: Sequence[float],
    k_out: Sequence[float],
    tol: float = 1e-8,
    max_iter: int = 100_000,
    nodes: Sequence[str] | None = None,
    damping: float = 0.5,
) -> DbcmFit:
    """Solve the degree-constrained Fermi system by a damped fixed point.

    The update is the multiplier form of iterative proportional fitting,
    ``x_i <- k_out_i / sum_j y_j / (1 + x_i y_j)``, mixed with the previous
    iterate. Zero-degree nodes keep fitness 0 and drop out of the sums.
    """
    k_in = np.asarray(k_in, dtype=float)
    k_out = np.asarray(k_out, dtype=float)
    _check_sequences(k_out, k_in)
    n = len(k_out)
    node_ids = tuple(nodes) if nodes is not None else tuple(f"n{i}" for i in range(n))
    if len(node_ids) != n:
        raise InfeasibleError("node id list does not match sequence length")

    forced, r_out, r_in = _pin_saturated(k_out, k_in)
    if not forced.any():
        forced_arg = None
        forced_f = np.zeros((n, n))
    else:
        forced_arg = forced
        forced_f = forced.astype(float)

    total = r_out.sum()
    out_zero = r_out == 0
    in_zero = r_in == 0
    if total == 0:
        # everything either zero or pinned by the boundary pass
        return DbcmFit(node_ids, k_out, k_in, np.zeros(n), np.zeros(n), forced_arg, 0.0, 0, tol)

    scale = np.sqrt(total)
    x = np.where(out_zero, 0.0, r_out / scale)
    y = np.where(in_zero, 0.0, r_in / scale)
    eye = np.eye(n, dtype=bool)

    def probs(xv: np.ndarray, yv: np.ndarray) -> np.ndarray:
        xy = np.outer(xv, yv)
        p = xy / (1.0 + xy)
        p[eye] = 0.0
        p[forced_f > 0] = 0.0  # forced pairs live outside the free system
        return p

    residual = np.inf
    iterations = 0
    for iterations in range(1, max_iter + 1):
        p = probs(x, y)
        row = p.sum(axis=1)
        with np.errstate(invalid="ignore", divide="ignore"):
            x_new = np.where(out_zero, 0.0, x * r_out / np.where(row > 0, row, 1.0))
        x = (1.0 - damping) * x + damping * x_new
        p = probs(x, y)
        col = p.sum(axis=0)
        with np.errstate(invalid="ignore", divide="ignore"):
            y_new = np.where(in_zero, 0.0, y * r_in / np.where(col > 0, col, 1.0))
        y = (1.0 - damping) * y + damping * y_new
        p = probs(x, y)
        full = p + forced_f
        np.fill_diagonal(full, 0.0)
        residual = max(
            float(np.abs(full.sum(axis=1) - k_out).max()),
            float(np.abs(full.sum(axis=0) - k_in).max()),
        )
        if residual <= tol:
            return DbcmFit(node_ids, k_out, k_in, x, y, forced_arg, residual, iterations, tol)
    raise ConvergenceError(
        f"degree system not converged after {max_iter} sweeps (residual {residual:.3e})",
        residual=residual,
        iterations=max_iter,
    )


def fit_dbcm_graph(g: WeightedDigraph, tol: float = 1e-8, max_iter: int = 100_000) -> DbcmFit:
    """Fit the binary ensemble on a graph's active-node degree sequences."""
    view = DenseView(g)
    return fit_dbcm(
        view.k_in.astype(float),
        view.k_out.astype(float),
        tol=tol,
        max_iter=max_iter,
        nodes=view.node_ids,
    )


def sample_dbcm(fit: DbcmFit, seed: int | np.random.Generator | None = None) -> WeightedDigraph:
    """One binary digraph: every off-diagonal pair an independent Bernoulli."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    p = fit.link_probabilities()
    a = rng.random(p.shape) < p
    np.fill_diagonal(a, False)
    ii, jj = np.nonzero(a)
    return WeightedDigraph._trusted(
        fit.nodes, dict.fromkeys(zip(ii.tolist(), jj.tolist()), 1.0)
    )


# --------------------------------------------------------------------------
# Directed weighted configuration model
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DwcmFit:
    """Strength stage on top of a fitted binary topology."""

    dbcm: DbcmFit
    s_out: np.ndarray
    s_in: np.ndarray
    w_out: np.ndarray  # strength fitness, out side
    w_in: np.ndarray
    residual: float
    iterations: int
    tol: float

    @property
    def nodes(self) -> tuple[str, ...]:
        return self.dbcm.nodes

    @property
    def n(self) -> int:
        return self.dbcm.n

    def lambda_matrix(self) -> np.ndarray:
        """Poisson means per pair, zero diagonal. Cached; treat as read-only."""
        cached = getattr(self, "_lam_cache", None)
        if cached is not None:
            return cached
        lam = np.outer(self.w_out, self.w_in)
        np.fill_diagonal(lam, 0.0)
        lam.setflags(write=False)
        object.__setattr__(self, "_lam_cache", lam)
        return lam

    def expected_weights(self) -> np.ndarray:
        return self.dbcm.link_probabilities() * self.lambda_matrix()

    def to_json(self) -> str:
        payload = json.loads(self.dbcm.to_json())
        payload.update(
            {
                "model": "dwcm",
                "s_out": self.s_out.tolist(),
                "s_in": self.s_in.tolist(),
                "w_out": self.w_out.tolist(),
                "w_in": self.w_in.tolist(),
                "strength_residual": self.residual,
                "strength_iterations": self.iterations,
                "strength_tol": self.tol,
            }
        )
        return json.dumps(payload, sort_keys=True)


def fit_dwcm_sequences(
    dbcm: DbcmFit,
    s_out: Sequence[float],
    s_in: Sequence[float],
    tol: float = 1e-8,
    max_iter: int = 100_000,
    damping: float = 0.5,
) -> DwcmFit:
    """Strength stage against a frozen binary fit.

    Solves ``sum_j p_ij w_out_i w_in_j = s_out_i`` (and the in-analogue),
    a nonnegative matrix-scaling problem, by the same damped scheme as the
    degree stage.
    """
    s_out = np.asarray(s_out, dtype=float)
    s_in = np.asarray(s_in, dtype=float)
    n = dbcm.n
    if len(s_out) != n or len(s_in) != n:
        raise InfeasibleError("strength sequences do not match the binary fit size")
    if np.any(s_out < 0) or np.any(s_in < 0):
        raise InfeasibleError("strengths must be nonnegative")
    if abs(s_out.sum() - s_in.sum()) > 1e-9 * max(1.0, s_out.sum()):
        raise InfeasibleError("total out-strength differs from total in-strength")
    if np.any((s_out > 0) & (dbcm.k_out == 0)) or np.any((s_in > 0) & (dbcm.k_in == 0)):
        raise InfeasibleError("positive strength on a zero-degree side")

    p = dbcm.link_probabilities()
    out_zero = s_out == 0
    in_zero = s_in == 0
    total = s_out.sum()
    if total == 0:
        return DwcmFit(dbcm, s_out, s_in, np.zeros(n), np.zeros(n), 0.0, 0, tol)
    scale = np.sqrt(total)
    u = np.where(out_zero, 0.0, s_out / scale)
    v = np.where(in_zero, 0.0, s_in / scale)

    residual = np.inf
    for iterations in range(1, max_iter + 1):
        denom = p @ v
        with np.errstate(invalid="ignore", divide="ignore"):
            u_new = np.where(out_zero, 0.0, s_out / np.where(denom > 0, denom, 1.0))
        u = (1.0 - damping) * u + damping * u_new
        denom = p.T @ u
        with np.errstate(invalid="ignore", divide="ignore"):
            v_new = np.where(in_zero, 0.0, s_in / np.where(denom > 0, denom, 1.0))
        v = (1.0 - damping) * v + damping * v_new
        lam = np.outer(u, v)
        np.fill_diagonal(lam, 0.0)
        ew = p * lam
        residual = max(
            float(np.abs(ew.sum(axis=1) - s_out).max()),
            float(np.abs(ew.sum(axis=0) - s_in).max()),
        )
        if residual <= tol:
            return DwcmFit(dbcm, s_out, s_in, u, v, residual, iterations, tol)
    raise ConvergenceError(
        f"strength system not converged after {max_iter} sweeps (residual {residual:.3e})",
        residual=residual,
        iterations=max_iter,
    )


def fit_dwcm(
    g: WeightedDigraph,
    tol: float = 1e-8,
    max_iter: int = 100_000,
    dbcm: DbcmFit | None = None,
    damping: float = 0.5,
) -> DwcmFit:
    """Fit the weighted ensemble on a graph: degrees first, then strengths."""
    view = DenseView(g)
    if dbcm is None:
        dbcm = fit_dbcm(
            view.k_in.astype(float), view.k_out.astype(float),
            tol=tol, max_iter=max_iter, nodes=view.node_ids,
        )
    elif dbcm.nodes != view.node_ids:
        raise InfeasibleError("binary fit was made for a different node set")
    return fit_dwcm_sequences(
        dbcm, view.s_out, view.s_in, tol=tol, max_iter=max_iter, damping=damping
    )


def sample_dwcm(fit: DwcmFit, seed: int | np.random.Generator | None = None) -> WeightedDigraph:
    """One weighted digraph: link Bernoulli(p_ij), weight Poisson(lambda_ij).

    A Bernoulli success whose Poisson draw is 0 stores no edge, so sampled
    degrees run slightly below the binary targets by p_ij exp(-lambda_ij)
    per pair while strengths are unbiased.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    p = fit.dbcm.link_probabilities()
    lam = fit.lambda_matrix()
    on = rng.random(p.shape) < p
    np.fill_diagonal(on, False)
    ii, jj = np.nonzero(on)
    weights = rng.poisson(lam[ii, jj])
    keep = weights > 0
    return WeightedDigraph._trusted(
        fit.nodes,
        dict(
            zip(
                zip(ii[keep].tolist(), jj[keep].tolist()),
                weights[keep].astype(float).tolist(),
            )
        ),
    )


# --------------------------------------------------------------------------
# Dense maximum-entropy baseline
# --------------------------------------------------------------------------


def dense_maxent(strengths: Sequence[float], total: float | None = None) -> np.ndarray:
    """Fully diversified expected-weight matrix w_i w_j / v, self-loops included.

    Row and column sums reproduce the strength sequence exactly.
    """
    w = np.asarray(strengths, dtype=float)
    if np.any(w < 0):
        raise InfeasibleError("strengths must be nonnegative")
    v = float(w.sum()) if total is None else float(total)
    if v <= 0:
        raise InfeasibleError("total strength must be positive")
    return np.outer(w, w) / v


# --------------------------------------------------------------------------
# Microcanonical switching
# --------------------------------------------------------------------------


class SwitchResult(NamedTuple):
    graph: WeightedDigraph
    accepted: int
    attempts: int
    exhausted: bool  # no switch could be accepted within the attempt budget


def _switch_single_edges(
    edges: set[tuple[int, int]],
    pool: list[tuple[int, int]],
    target: int,
    rng: np.random.Generator,
    budget: int,
    protect_reverse: bool,
) -> tuple[int, int]:
    """In-place two-edge swaps within ``pool``; returns (accepted, attempts).

    With ``protect_reverse`` a proposed edge is rejected when its reverse
    exists anywhere in the graph, so non-reciprocated links stay
    non-reciprocated (the reciprocal-model constraint).
    """
    m = len(pool)
    accepted = 0
    attempts = 0
    if m < 2 or target <= 0:
        return 0, 0
    block = 8192
    buf = rng.integers(0, m, size=(block, 2))
    bi = 0
    while accepted < target and attempts < budget:
        if bi >= block:
            buf = rng.integers(0, m, size=(block, 2))
            bi = 0
        i1, i2 = buf[bi]
        bi += 1
        attempts += 1
        if i1 == i2:
            continue
        a, b = pool[i1]
        c, d = pool[i2]
        if a == d or c == b or a == c or b == d:
            continue
        if (a, d) in edges or (c, b) in edges:
            continue
        if protect_reverse and ((d, a) in edges or (b, c) in edges):
            continue
        edges.discard((a, b))
        edges.discard((c, d))
        edges.add((a, d))
        edges.add((c, b))
        pool[i1] = (a, d)
        pool[i2] = (c, b)
        accepted += 1
    return accepted, attempts


def _switch_mutual_pairs(
    edges: set[tuple[int, int]],
    dyads: list[tuple[int, int]],
    target: int,
    rng: np.random.Generator,
    budget: int,
) -> tuple[int, int]:
    """Swap mutual dyads as units: {a,b},{c,d} -> {a,d},{c,b}.

    One pool entry per dyad; a random orientation bit per proposal covers
    both pairings. Proposals touching an existing link in either direction
    are rejected so single links stay single and the graph stays simple.
    """
    m = len(dyads)
    accepted = 0
    attempts = 0
    if m < 2 or target <= 0:
        return 0, 0
    block = 8192
    buf = rng.integers(0, m, size=(block, 2))
    flips = rng.integers(0, 2, size=(block, 2))
    bi = 0
    while accepted < target and attempts < budget:
        if bi >= block:
            buf = rng.integers(0, m, size=(block, 2))
            flips = rng.integers(0, 2, size=(block, 2))
            bi = 0
        i1, i2 = buf[bi]
        f1, f2 = flips[bi]
        bi += 1
        attempts += 1
        if i1 == i2:
            continue
        a, b = dyads[i1]
        if f1:
            a, b = b, a
        c, d = dyads[i2]
        if f2:
            c, d = d, c
        if len({a, b, c, d}) != 4:
            continue
        if (a, d) in edges or (d, a) in edges or (c, b) in edges or (b, c) in edges:
            continue
        for e in ((a, b), (b, a), (c, d), (d, c)):
            edges.remove(e)
        for e in ((a, d), (d, a), (c, b), (b, c)):
            edges.add(e)
        dyads[i1] = (a, d)
        dyads[i2] = (c, b)
        accepted += 1
    return accepted, attempts


def switch_randomize(
    g: WeightedDigraph,
    mode: str = "degree",
    n_switch_per_edge: int = 10,
    seed: int | np.random.Generator | None = None,
    attempt_factor: int = 100,
) -> SwitchResult:
    """Rewire a binary digraph by accepted two-edge swaps.

    ``degree`` mode preserves every node's in- and out-degree exactly.
    ``reciprocal`` mode additionally preserves every node's number of
    mutual links by swapping mutual dyads only against mutual dyads and
    single links only against single links. The attempt budget is
    ``attempt_factor`` times the accepted-switch target; if nothing could
    be accepted at all the original graph comes back flagged ``exhausted``.
    """
    if mode not in ("degree", "reciprocal"):
        raise ValueError(f"mode must be 'degree' or 'reciprocal', got {mode!r}")
    if not g.directed:
        raise DegenerateError("switching operates on directed graphs")
    stripped, n_loops, _ = strip_self_loops(g)
    if n_loops:
        raise DegenerateError("switching is defined for graphs without self-loops")
    if not stripped.is_binary():
        raise DegenerateError("switching operates on binary graphs; project first")
    if stripped.edge_count < 2:
        raise DegenerateError("switching needs at least 2 edges")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    edges = set(stripped.edges)

    if mode == "degree":
        pool = sorted(edges)
        target = n_switch_per_edge * len(pool)
        accepted, attempts = _switch_single_edges(
            edges, pool, target, rng, attempt_factor * max(target, 1), protect_reverse=False
        )
    else:
        singles = sorted(e for e in edges if (e[1], e[0]) not in edges)
        dyads = sorted((i, j) for (i, j) in edges if (j, i) in edges and i < j)
        t_single = n_switch_per_edge * len(singles)
        t_mutual = n_switch_per_edge * len(dyads)
        acc_s, att_s = _switch_single_edges(
            edges, singles, t_single, rng, attempt_factor * max(t_single, 1), protect_reverse=True
        )
        acc_m, att_m = _switch_mutual_pairs(
            edges, dyads, t_mutual, rng, attempt_factor * max(t_mutual, 1)
        )
        accepted, attempts = acc_s + acc_m, att_s + att_m

    if accepted == 0:
        return SwitchResult(graph=stripped, accepted=0, attempts=attempts, exhausted=True)
    out = WeightedDigraph._trusted(stripped.nodes, {e: 1.0 for e in edges})
    return SwitchResult(graph=out, accepted=accepted, attempts=attempts, exhausted=False)


def _binary_pattern(g: WeightedDigraph) -> WeightedDigraph:
    stripped, _, _ = strip_self_loops(g)
    return project_binary(stripped)


# --------------------------------------------------------------------------
# Ensemble statistics
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EnsembleReport:
    """Observed value of one metric against its null-ensemble distribution."""

    metric: str
    observed: float
    mean: float
    sd: float
    p_lower: float | None
    p_upper: float | None
    z: float | None
    samples: int
    valid_samples: int
    degenerate: bool  # metric undefined on > 50% of samples, or sd == 0


#: Metric registry for ensemble comparisons: name -> callable(DenseView).
ENSEMBLE_METRICS: dict[str, Callable[[DenseView], float]] = {
    "edge_count": lambda v: float(v.edge_count),
    "largest_weak_component": lambda v: float(_metrics.components(v, "weak")[0]) if v.n else 0.0,
    "largest_strong_component": lambda v: float(_metrics.components(v, "strong")[0]) if v.n else 0.0,
    "reciprocated_links": lambda v: float(_metrics.reciprocated_links(v)),
    "triangles": lambda v: float(_metrics.triangles(v)),
    "binary_reciprocity": lambda v: _metrics.reciprocity(v, "binary"),
    "strength_reciprocity": lambda v: _metrics.reciprocity(v, "weighted"),
    "out_degree_assortativity": lambda v: _metrics.assortativity(v, "out-degree", n_perm=0).coefficient,
    "in_degree_assortativity": lambda v: _metrics.assortativity(v, "in-degree", n_perm=0).coefficient,
    "out_strength_assortativity": lambda v: _metrics.assortativity(v, "out-strength", n_perm=0).coefficient,
    "in_strength_assortativity": lambda v: _metrics.assortativity(v, "in-strength", n_perm=0).coefficient,
}
for _c, _label in enumerate(TRIAD_LABELS):
    ENSEMBLE_METRICS[f"triad_{_c + 1}_{_label}"] = (
        lambda v, _i=_c: float(_metrics.triad_census(v).counts[_i])
    )

#: Metrics that make sense for a binary (DBCM-style) null.
BINARY_METRICS = (
    "edge_count",
    "largest_weak_component",
    "largest_strong_component",
    "reciprocated_links",
    "triangles",
    "binary_reciprocity",
    "out_degree_assortativity",
    "in_degree_assortativity",
)

#: Metrics evaluated against the weighted (DWCM) null.
WEIGHTED_METRICS = (
    "strength_reciprocity",
    "out_strength_assortativity",
    "in_strength_assortativity",
)


def _evaluate_metrics(view: DenseView, names: Sequence[str]) -> dict[str, float]:
    out = {}
    for name in names:
        try:
            out[name] = float(ENSEMBLE_METRICS[name](view))
        except DegenerateError:
            out[name] = np.nan
    return out


def _null_sampler(
    null: DbcmFit | DwcmFit | str,
    observed: WeightedDigraph,
) -> Callable[[np.random.Generator], WeightedDigraph]:
    if isinstance(null, DwcmFit):
        return lambda rng: sample_dwcm(null, rng)
    if isinstance(null, DbcmFit):
        return lambda rng: sample_dbcm(null, rng)
    if null in ("degree-switch", "reciprocal-switch"):
        mode = "degree" if null == "degree-switch" else "reciprocal"
        base = _binary_pattern(observed)
        return lambda rng: switch_randomize(base, mode=mode, seed=rng).graph
    raise ValueError(
        "null must be a DbcmFit, a DwcmFit, 'degree-switch' or 'reciprocal-switch'"
    )


def _ensemble_one_sample(
    k: int,
    seed: int | None,
    null: DbcmFit | DwcmFit | str,
    observed: WeightedDigraph,
    names: tuple[str, ...],
) -> dict[str, float]:
    rng = child_rng(seed, k)
    sampler = _null_sampler(null, observed)
    return _evaluate_metrics(DenseView(sampler(rng)), names)


def ensemble_stats(
    observed: WeightedDigraph,
    null: DbcmFit | DwcmFit | str,
    metric_names: Sequence[str] | None = None,
    samples: int = 1000,
    seed: int | None = None,
    workers: int | None = None,
) -> list[EnsembleReport]:
    """Observed vs ensemble for each requested metric.

    Draws ``samples`` independent realizations of the null, evaluates every
    metric on each, and reports mean, sd, two empirical tail p-values with
    the +1/(S+1) correction, and the z-score. A metric undefined (degenerate)
    on more than half the samples is flagged and gets no p-values.
    """
    if samples < 100:
        raise InsufficientDataError(f"ensemble statistics need S >= 100, got {samples}")
    if metric_names is None:
        metric_names = BINARY_METRICS if not isinstance(null, DwcmFit) else (
            BINARY_METRICS + WEIGHTED_METRICS
        )
    names = tuple(metric_names)
    unknown = [m for m in names if m not in ENSEMBLE_METRICS]
    if unknown:
        raise ValueError(f"unknown metric(s) {unknown}; have {sorted(ENSEMBLE_METRICS)}")
    if isinstance(null, (DbcmFit, DwcmFit)) and null.residual > null.tol:
        raise InfeasibleError("null-model fit did not satisfy its constraints")

    obs_values = _evaluate_metrics(DenseView(observed), names)
    worker = functools.partial(
        _ensemble_one_sample, seed=seed, null=null, observed=observed, names=names
    )
    rows = map_samples(worker, samples, workers)

    reports = []
    for name in names:
        draws = np.asarray([r[name] for r in rows])
        valid = draws[~np.isnan(draws)]
        n_valid = int(valid.size)
        obs = obs_values[name]
        degenerate = n_valid < samples / 2 or np.isnan(obs)
        if degenerate or n_valid == 0:
            reports.append(
                EnsembleReport(name, obs, float(np.nan), float(np.nan), None, None, None,
                               samples, n_valid, True)
            )
            continue
        mean = float(valid.mean())
        sd = float(valid.std(ddof=1)) if n_valid > 1 else 0.0
        p_lower = (1 + int((valid <= obs).sum())) / (n_valid + 1)
        p_upper = (1 + int((valid >= obs).sum())) / (n_valid + 1)
        z = (obs - mean) / sd if sd > 0 else None
        reports.append(
            EnsembleReport(name, obs, mean, sd, p_lower, p_upper, z,
                           samples, n_valid, sd == 0.0)
        )
    return reports


# --------------------------------------------------------------------------
# Motif z-scores
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MotifReport:
    """Triad-census z-scores against a switching null."""

    null: str
    observed: tuple[int, ...]
    mean: tuple[float, ...]
    sd: tuple[float, ...]
    z: tuple[float | None, ...]  # None where sd == 0
    samples: int

    def as_rows(self) -> list[dict]:
        rows = []
        for c in range(13):
            rows.append(
                {
                    "triad": c + 1,
                    "label": TRIAD_LABELS[c],
                    "observed": self.observed[c],
                    "mean": self.mean[c],
                    "sd": self.sd[c],
                    "z": self.z[c],
                }
            )
        return rows


def _motif_one_sample(
    k: int, seed: int | None, g: WeightedDigraph, mode: str, n_switch_per_edge: int
) -> tuple[int, ...]:
    rng = child_rng(seed, k)
    out = switch_randomize(g, mode=mode, n_switch_per_edge=n_switch_per_edge, seed=rng)
    return _metrics.triad_census(out.graph).counts


def motif_zscores(
    g: WeightedDigraph,
    null: str = "degree-switch",
    samples: int = 1000,
    seed: int | None = None,
    n_switch_per_edge: int = 10,
    workers: int | None = None,
) -> MotifReport:
    """Z-score of each of the 13 triad classes against a switching ensemble.

    z_c = (observed_c - mean_c) / sd_c over ``samples`` randomizations;
    classes with sd 0 are reported with z = None.
    """
    if null not in ("degree-switch", "reciprocal-switch"):
        raise ValueError("null must be 'degree-switch' or 'reciprocal-switch'")
    if samples < 100:
        raise InsufficientDataError(f"motif z-scores need S >= 100, got {samples}")
    mode = "degree" if null == "degree-switch" else "reciprocal"
    g = _binary_pattern(g)
    observed = _metrics.triad_census(g).counts
    worker = functools.partial(
        _motif_one_sample, seed=seed, g=g, mode=mode, n_switch_per_edge=n_switch_per_edge
    )
    draws = np.asarray(map_samples(worker, samples, workers), dtype=float)
    mean = draws.mean(axis=0)
    sd = draws.std(axis=0, ddof=1)
    z = tuple(
        (float((observed[c] - mean[c]) / sd[c]) if sd[c] > 0 else None) for c in range(13)
    )
    return MotifReport(
        null=null,
        observed=tuple(observed),
        mean=tuple(float(x) for x in mean),
        sd=tuple(float(x) for x in sd),
        z=z,
        samples=samples,
    )


def strength_reciprocity(g: WeightedDigraph) -> float:
    """Weighted reciprocity coefficient (delegates to the metrics module)."""
    return _metrics.reciprocity(g, mode="weighted")
