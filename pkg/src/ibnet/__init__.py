"""Multiplex interbank network analysis toolkit.

Layers of directed weighted graphs over a shared node universe, the full
summary-statistics suite (degrees, density, components, path lengths,
reciprocity, assortativity, clustering, triad census, tail fits),
cross-layer similarity with Monte Carlo significance, and maximum-entropy
null models (degree-constrained, strength-constrained, and switching
randomizers) with ensemble p-values and motif z-scores.
"""

from .errors import (
    ConvergenceError,
    DegenerateError,
    IbnetError,
    InfeasibleError,
    InsufficientDataError,
    SchemaError,
)
from .graphs import (
    EdgeRecord,
    GroupMap,
    Multiplex,
    WeightedDigraph,
    aggregate_layers,
    consolidate,
    project_binary,
    strip_self_loops,
    symmetrize,
)
from .io import DEFAULT_LAYERS, load_edge_list, load_group_map, save_edge_list
from .metrics import (
    TRIAD_LABELS,
    DegreeRecord,
    TriadCensus,
    assortativity,
    avg_path_length,
    clustering,
    components,
    degree_strength,
    density,
    knn_curve,
    reciprocated_links,
    reciprocity,
    spearman_degree_strength,
    triad_census,
    triangles,
)
from .nullmodels import (
    DbcmFit,
    DwcmFit,
    EnsembleReport,
    MotifReport,
    SwitchResult,
    dense_maxent,
    ensemble_stats,
    fit_dbcm,
    fit_dbcm_graph,
    fit_dwcm,
    motif_zscores,
    sample_dbcm,
    sample_dwcm,
    strength_reciprocity,
    switch_randomize,
)
from .similarity import (
    AlignedPair,
    SimilarityMatrix,
    SimilarityReport,
    align,
    cosine,
    jaccard,
    layer_similarity,
    significance,
    similarity_matrix,
)
from .synth import LayerConfig, SynthConfig, generate
from .tails import LikelihoodRatioResult, PowerLawFit, ccdf, compare_lognormal, fit_power_law

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
