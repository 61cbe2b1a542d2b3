import numpy as np
import pytest

import ibnet.metrics as M
from ibnet.errors import InfeasibleError
from ibnet.graphs import project_binary, strip_self_loops
from ibnet.similarity import align, jaccard
from ibnet.synth import LayerConfig, SynthConfig, generate
from ibnet.tails import fit_power_law


def one_layer_config(n=300, density=0.02, reciprocity=0.0, participation=1.0,
                     exponent=2.3, seed=0, overlap=1.0):
    return SynthConfig(
        n_nodes=n,
        layers=(
            LayerConfig("L", density=density, exponent=exponent,
                        reciprocity=reciprocity, participation=participation),
        ),
        overlap=overlap,
        seed=seed,
    )


class TestDeterminism:
    def test_same_seed_identical(self):
        cfg = SynthConfig(n_nodes=120, seed=42)
        assert generate(cfg) == generate(cfg)

    def test_different_seed_differs(self):
        a = generate(SynthConfig(n_nodes=120, seed=1))
        b = generate(SynthConfig(n_nodes=120, seed=2))
        assert a != b


class TestOverlap:
    def test_full_overlap_identical_layers(self):
        layers = tuple(
            LayerConfig(name, density=0.02, reciprocity=0.3) for name in ("A", "B", "C")
        )
        m = generate(SynthConfig(n_nodes=150, layers=layers, overlap=1.0, seed=7))
        ga, gb, gc = m.layers["A"], m.layers["B"], m.layers["C"]
        assert set(ga.edges) == set(gb.edges) == set(gc.edges)
        assert jaccard(align(ga, gb, "union")) == 1.0

    def test_zero_overlap_near_independence(self):
        # E[J] for independent equal-density layers is d / (2 - d)
        d = 0.02
        vals = []
        for seed in range(8):
            layers = (LayerConfig("A", density=d), LayerConfig("B", density=d))
            m = generate(SynthConfig(n_nodes=250, layers=layers, overlap=0.0, seed=seed))
            vals.append(jaccard(align(m.layers["A"], m.layers["B"], "union")))
        mean_j = float(np.mean(vals))
        expected = d / (2 - d)
        assert expected * 0.4 <= mean_j <= expected * 2.5

    def test_overlap_monotone_in_jaccard(self):
        ds = []
        for overlap in (0.0, 0.5, 1.0):
            js = []
            for seed in range(6):
                layers = (LayerConfig("A", density=0.02), LayerConfig("B", density=0.02))
                m = generate(SynthConfig(n_nodes=200, layers=layers, overlap=overlap, seed=seed))
                js.append(jaccard(align(m.layers["A"], m.layers["B"], "union")))
            ds.append(float(np.mean(js)))
        assert ds[0] < ds[1] < ds[2]


class TestRealizedShape:
    def test_density_within_20_percent(self):
        vals = []
        for seed in range(6):
            m = generate(one_layer_config(n=500, density=0.01, seed=seed))
            vals.append(M.density(m.layers["L"]))
        mean_d = float(np.mean(vals))
        assert abs(mean_d - 0.01) <= 0.002

    def test_density_with_boost_still_close(self):
        vals = []
        for seed in range(6):
            m = generate(one_layer_config(n=400, density=0.015, reciprocity=0.5, seed=seed))
            vals.append(M.density(m.layers["L"]))
        assert abs(float(np.mean(vals)) - 0.015) <= 0.003

    def test_degree_tail_recovers_exponent(self):
        m = generate(one_layer_config(n=1000, density=0.01, exponent=2.3, seed=3))
        t = M.degree_strength(m.layers["L"])
        ks = t.k_in[t.k_in > 0]
        fit = fit_power_law(ks.tolist())
        assert 2.0 <= fit.alpha <= 2.6

    def test_reciprocity_monotone_in_boost(self):
        grid = (0.0, 0.25, 0.5, 0.75, 1.0)
        rhos = []
        for boost in grid:
            vals = []
            for seed in range(5):
                m = generate(one_layer_config(n=300, density=0.02,
                                              reciprocity=boost, seed=seed))
                vals.append(M.reciprocity(m.layers["L"], "binary"))
            rhos.append(float(np.mean(vals)))
        assert all(a < b for a, b in zip(rhos, rhos[1:]))

    def test_participation_limits_active_set(self):
        m = generate(one_layer_config(n=400, density=0.05, participation=0.25, seed=1))
        g = m.layers["L"]
        assert g.active_node_count() <= 100
        assert g.active_node_count() >= 60  # most selected nodes trade

    def test_weights_positive(self):
        m = generate(one_layer_config(n=200, density=0.03, seed=5))
        assert all(w > 0 for w in m.layers["L"].edges.values())

    def test_no_self_loops(self):
        m = generate(SynthConfig(n_nodes=200, seed=9))
        for g in m.layers.values():
            assert g.self_loop_count == 0


class TestValidation:
    def test_bad_density(self):
        with pytest.raises(InfeasibleError):
            LayerConfig("L", density=1.5)

    def test_bad_exponent(self):
        with pytest.raises(InfeasibleError):
            LayerConfig("L", exponent=1.0)

    def test_infeasible_participation(self):
        with pytest.raises(InfeasibleError):
            generate(one_layer_config(n=100, density=0.5, participation=0.01))

    def test_duplicate_layer_names(self):
        with pytest.raises(InfeasibleError):
            SynthConfig(layers=(LayerConfig("A"), LayerConfig("A")))

    def test_density_too_low_for_edges(self):
        with pytest.raises(InfeasibleError):
            generate(one_layer_config(n=10, density=0.001))
