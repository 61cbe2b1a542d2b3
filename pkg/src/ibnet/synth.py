"""Deterministic synthetic multiplex generator.

The real supervisory data behind this toolkit is confidential, so tests
and demos run on generated multiplexes shaped like the stylized facts of
interbank layers: heavy-tailed (power-law) fitness driving both link
probabilities and weights, tunable density and reciprocity per layer,
overlapping participation across layers.

Construction per layer: draw per-node in/out fitness from a Pareto tail,
keep the top ``participation`` share of nodes, connect i -> j with
probability proportional to the fitness product rescaled to the target
density, then add missing reverse edges with the reciprocity-boost
probability. The ``overlap`` knob mixes layer-private randomness with
draws shared by all layers, so overlap 1 with identical layer configs
reproduces the same layer everywhere and overlap 0 makes layers
independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleError
from .graphs import Multiplex, WeightedDigraph
from .io import DEFAULT_LAYERS


@dataclass(frozen=True)
class LayerConfig:
    name: str
    density: float = 0.01
    exponent: float = 2.3  # tail exponent of the fitness density
    reciprocity: float = 0.0  # chance to add the reverse of a one-way link
    participation: float = 1.0  # share of the universe active in this layer

    def __post_init__(self):
        if not 0.0 < self.density < 1.0:
            raise InfeasibleError(f"layer {self.name}: density must be in (0, 1)")
        if self.exponent <= 1.0:
            raise InfeasibleError(f"layer {self.name}: exponent must exceed 1")
        if not 0.0 <= self.reciprocity <= 1.0:
            raise InfeasibleError(f"layer {self.name}: reciprocity boost must be in [0, 1]")
        if not 0.0 < self.participation <= 1.0:
            raise InfeasibleError(f"layer {self.name}: participation must be in (0, 1]")


def stylized_layers() -> tuple[LayerConfig, ...]:
    """Five-segment defaults with densities in the observed few-percent range."""
    return (
        LayerConfig(DEFAULT_LAYERS[0], density=0.009, reciprocity=0.4, participation=1.0),
        LayerConfig(DEFAULT_LAYERS[1], density=0.005, reciprocity=0.3, participation=0.95),
        LayerConfig(DEFAULT_LAYERS[2], density=0.006, reciprocity=0.1, participation=0.5),
        LayerConfig(DEFAULT_LAYERS[3], density=0.025, reciprocity=0.15, participation=0.15),
        LayerConfig(DEFAULT_LAYERS[4], density=0.1, reciprocity=0.1, participation=0.03),
    )


@dataclass(frozen=True)
class SynthConfig:
    n_nodes: int = 500
    layers: tuple[LayerConfig, ...] = field(default_factory=stylized_layers)
    overlap: float = 1.0  # share of randomness common to all layers
    weight_scale: float = 1.0  # mean weight, millions of EUR
    period: str = "2012"
    seed: int = 0

    def __post_init__(self):
        if self.n_nodes < 3:
            raise InfeasibleError("need at least 3 nodes")
        if not 0.0 <= self.overlap <= 1.0:
            raise InfeasibleError("overlap must be in [0, 1]")
        if self.weight_scale <= 0:
            raise InfeasibleError("weight scale must be positive")
        if len({l.name for l in self.layers}) != len(self.layers):
            raise InfeasibleError("layer names must be unique")


def _pareto(u: np.ndarray, exponent: float) -> np.ndarray:
    # inverse CDF of a unit-minimum Pareto with density exponent `exponent`
    return (1.0 - u) ** (-1.0 / (exponent - 1.0))


def _rescale_to_density(raw: np.ndarray, target_edges: float) -> np.ndarray:
    """Find c so that sum of min(1, c * raw) hits the edge target (bisection)."""
    total_possible = raw.size - np.isclose(raw, 0).sum()
    if target_edges > total_possible:
        raise InfeasibleError("requested density exceeds the available node pairs")
    hi = 1.0
    while np.minimum(1.0, hi * raw).sum() < target_edges:
        hi *= 2.0
        if hi > 1e18:
            raise InfeasibleError("cannot reach requested density")
    lo = 0.0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if np.minimum(1.0, mid * raw).sum() < target_edges:
            lo = mid
        else:
            hi = mid
    return np.minimum(1.0, hi * raw)


def generate(config: SynthConfig) -> Multiplex:
    """Build one multiplex; same config (incl. seed) gives a bit-identical result."""
    rng = np.random.default_rng(np.random.SeedSequence(entropy=config.seed))
    n = config.n_nodes
    nodes = tuple(f"B{i:05d}" for i in range(n))

    # draws shared by all layers
    common_u_out = rng.random(n)
    common_u_in = rng.random(n)
    common_edge_u = rng.random((n, n))
    common_boost_u = rng.random((n, n))

    layers: dict[str, WeightedDigraph] = {}
    for cfg in config.layers:
        lrng = rng  # layer draws continue the master stream, in layer order
        mix_nodes = lrng.random(n) < config.overlap
        mix_pairs = lrng.random((n, n)) < config.overlap
        u_out = np.where(mix_nodes, common_u_out, lrng.random(n))
        u_in = np.where(mix_nodes, common_u_in, lrng.random(n))
        edge_u = np.where(mix_pairs, common_edge_u, lrng.random((n, n)))
        boost_u = np.where(mix_pairs, common_boost_u, lrng.random((n, n)))

        f_out = _pareto(u_out, cfg.exponent)
        f_in = _pareto(u_in, cfg.exponent)

        n_active = int(round(cfg.participation * n))
        if n_active < 2:
            raise InfeasibleError(
                f"layer {cfg.name}: participation {cfg.participation} leaves < 2 nodes"
            )
        score = f_out + f_in
        active = np.sort(np.argsort(-score, kind="stable")[:n_active])

        # base density compensates the edges the reciprocity boost will add
        base_density = cfg.density / (1.0 + cfg.reciprocity)
        target_edges = base_density * n_active * (n_active - 1)
        if target_edges < 1.0:
            raise InfeasibleError(
                f"layer {cfg.name}: density {cfg.density} yields < 1 expected edge"
            )
        raw = np.outer(f_out[active], f_in[active])
        np.fill_diagonal(raw, 0.0)
        p = _rescale_to_density(raw, target_edges)

        sub_edge_u = edge_u[np.ix_(active, active)]
        adj = sub_edge_u < p
        np.fill_diagonal(adj, False)

        # reciprocity boost: one-way links gain their reverse with prob cfg.reciprocity
        if cfg.reciprocity > 0:
            sub_boost_u = boost_u[np.ix_(active, active)]
            one_way = adj & ~adj.T
            add_reverse = one_way & (sub_boost_u < cfg.reciprocity)
            adj = adj | add_reverse.T

        ii, jj = np.nonzero(adj)
        # weights: fitness products times lognormal noise, mean ~ weight_scale
        fo = f_out[active]
        fi = f_in[active]
        noise = lrng.lognormal(mean=0.0, sigma=1.0, size=ii.size)
        raw_w = fo[ii] * fi[jj] * noise
        mean_pair = float(np.mean(fo) * np.mean(fi)) * np.exp(0.5)
        w = config.weight_scale * raw_w / mean_pair

        edges = {
            (int(active[i]), int(active[j])): float(wij)
            for i, j, wij in zip(ii, jj, w)
        }
        layers[cfg.name] = WeightedDigraph(nodes, edges)

    return Multiplex(period=config.period, layers=layers)
