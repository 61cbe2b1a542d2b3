"""Command-line front end.

One subcommand per analysis family so each report table or figure has a
single reproduction command:

* ``synth``      generate a test multiplex (CSV edge list)
* ``ingest``     validate, optionally consolidate, summarize volumes
* ``metrics``    per-layer summary statistics + CCDF / neighbor-degree plot data
* ``similarity`` cross-layer and cross-period similarity matrices
* ``fit``        degree- and strength-constrained ensemble fits (JSON)
* ``ensemble``   observed metrics vs canonical ensembles (p-values, z-scores)
* ``motifs``     13 triad z-scores against switching nulls

All randomness is seeded; rerunning a command with the same flags gives
byte-identical artifacts regardless of the ``IBNET_WORKERS`` setting.
Failed commands remove whatever partial artifacts they had written.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io as _io
from . import metrics as _metrics
from . import reports as _reports
from . import similarity as _similarity
from . import tails as _tails
from .errors import DegenerateError, IbnetError, InsufficientDataError
from .graphs import GroupMap, Multiplex, aggregate_layers, consolidate
from .nullmodels import (
    BINARY_METRICS,
    WEIGHTED_METRICS,
    ensemble_stats,
    fit_dbcm_graph,
    fit_dwcm,
    motif_zscores,
)
from .synth import LayerConfig, SynthConfig, generate

TOTAL_LABEL = "TOTAL"


class _Artifacts:
    """Tracks files written by one command so failures can clean up."""

    def __init__(self):
        self.paths: list[Path] = []

    def path(self, out_dir: Path, name: str) -> Path:
        p = out_dir / name
        self.paths.append(p)
        return p

    def discard_all(self) -> None:
        for p in self.paths:
            try:
                p.unlink(missing_ok=True)
            except OSError:
                pass


def _load_input(args) -> dict[str, Multiplex]:
    vocab = None
    if getattr(args, "manifest", None):
        vocab = _io.load_layer_manifest(args.manifest)
    multiplexes = _io.load_edge_list(args.input, layer_vocabulary=vocab)
    if getattr(args, "groups", None):
        gm = GroupMap(_io.load_group_map(args.groups))
        multiplexes = {p: consolidate(m, gm) for p, m in multiplexes.items()}
    selection = getattr(args, "layers", None)
    if selection:
        wanted = [s.strip() for s in selection.split(",") if s.strip()]
        filtered = {}
        for p, m in multiplexes.items():
            missing = [w for w in wanted if w not in m.layers]
            if missing:
                raise DegenerateError(f"period {p}: unknown layer(s) {missing}")
            filtered[p] = Multiplex(period=p, layers={w: m.layers[w] for w in wanted})
        multiplexes = filtered
    return multiplexes


def _layer_items(m: Multiplex, with_total: bool = True):
    items = [(name, g) for name, g in m.layers.items()]
    if with_total and len(m.layers) > 1:
        items.append((TOTAL_LABEL, aggregate_layers(m)))
    return items


def _try(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (DegenerateError, InsufficientDataError):
        return None


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def cmd_synth(args, artifacts: _Artifacts) -> int:
    if args.layer_spec:
        layer_cfgs = []
        for chunk in args.layer_spec.split(","):
            parts = chunk.split(":")
            if len(parts) < 2:
                raise DegenerateError(
                    f"bad layer spec {chunk!r}; want name:density[:reciprocity[:participation]]"
                )
            layer_cfgs.append(
                LayerConfig(
                    name=parts[0],
                    density=float(parts[1]),
                    reciprocity=float(parts[2]) if len(parts) > 2 else 0.0,
                    participation=float(parts[3]) if len(parts) > 3 else 1.0,
                )
            )
        layers = tuple(layer_cfgs)
    else:
        layers = SynthConfig().layers
    config = SynthConfig(
        n_nodes=args.nodes,
        layers=layers,
        overlap=args.overlap,
        weight_scale=args.weight_scale,
        period=args.period,
        seed=args.seed,
    )
    m = generate(config)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    artifacts.paths.append(out)
    _io.save_edge_list(m, out)
    print(f"synth: wrote {out} ({sum(g.edge_count for g in m.layers.values())} edges)")
    return 0


def cmd_ingest(args, artifacts: _Artifacts) -> int:
    multiplexes = _load_input(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for period, m in sorted(multiplexes.items()):
        for name, g in list(m.layers.items()) + [(TOTAL_LABEL, aggregate_layers(m))]:
            rows.append(
                {
                    "period": period,
                    "layer": name,
                    "nodes": g.active_node_count(),
                    "edges": g.edge_count - g.self_loop_count,
                    "total_weight": g.total_weight,
                    "self_loops": g.self_loop_count,
                    "self_loop_weight": g.self_loop_weight,
                }
            )
    path = artifacts.path(out_dir, f"volumes.{args.format}")
    _reports.emit_table(rows, args.format, path)
    if args.groups:
        cpath = artifacts.path(out_dir, "consolidated.csv")
        _io.save_edge_list(list(multiplexes.values()), cpath)
    print(f"ingest: {len(multiplexes)} period(s), wrote {path}")
    return 0


def cmd_metrics(args, artifacts: _Artifacts) -> int:
    multiplexes = _load_input(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for period, m in sorted(multiplexes.items()):
        rows = []
        tail_rows = []
        for name, g in _layer_items(m):
            view = _metrics.DenseView(g)
            clu_d = _try(_metrics.clustering, view, "directed")
            clu_u = _try(_metrics.clustering, view, "undirected")
            row = {
                "period": period,
                "layer": name,
                "nodes": g.active_node_count(),
                "edges": view.edge_count,
                "density": _try(_metrics.density, view),
                "largest_weak": (_metrics.components(view, "weak") or [0])[0],
                "largest_strong": (_metrics.components(view, "strong") or [0])[0],
                "avg_undirected_path": _try(_metrics.avg_path_length, view, "undirected"),
                "avg_directed_path": _try(_metrics.avg_path_length, view, "directed"),
                "spearman_out": _try(_metrics.spearman_degree_strength, view, "out"),
                "spearman_in": _try(_metrics.spearman_degree_strength, view, "in"),
                "reciprocated_links": _metrics.reciprocated_links(view),
                "reciprocity_binary": _try(_metrics.reciprocity, view, "binary"),
                "reciprocity_weighted": _try(_metrics.reciprocity, view, "weighted"),
                "triangles": _metrics.triangles(view),
                "avg_clustering_directed": clu_d.average if clu_d else None,
                "avg_clustering_undirected": clu_u.average if clu_u else None,
            }
            for attr in _metrics.ASSORTATIVITY_ATTRIBUTES:
                key = attr.replace("-", "_")
                res = _try(
                    _metrics.assortativity, view, attr, n_perm=args.nperm, seed=args.seed
                )
                row[f"assort_{key}"] = res.coefficient if res else None
                row[f"assort_{key}_p"] = res.p_value if res else None
            rows.append(row)

            # degree-tail fits and plot data
            table = _metrics.degree_strength(g)
            for direction, ks in (("in", table.k_in), ("out", table.k_out)):
                sample = ks[ks > 0]
                fit = None
                if sample.size >= 10:
                    fit = _try(_tails.fit_power_law, sample.tolist())
                llr = None
                if fit is not None:
                    llr = _try(_tails.compare_lognormal, sample.tolist(), fit)
                tail_rows.append(
                    {
                        "period": period,
                        "layer": name,
                        "direction": direction,
                        "alpha": fit.alpha if fit else None,
                        "x_min": fit.x_min if fit else None,
                        "ks": fit.ks if fit else None,
                        "n_tail": fit.n_tail if fit else None,
                        "llr": llr.llr if llr else None,
                        "llr_p": llr.p_value if llr else None,
                    }
                )
                points = _tails.ccdf(sample.tolist()) if sample.size else []
                _reports.write_csv(
                    artifacts.path(out_dir, f"ccdf_{period}_{name}_{direction}.csv"),
                    ("degree", "ccdf"),
                    points,
                )
            knn = _metrics.knn_curve(g, "in")
            _reports.write_csv(
                artifacts.path(out_dir, f"knn_{period}_{name}.csv"),
                ("degree", "avg_neighbor_degree"),
                sorted(knn.items()),
            )
        _reports.emit_table(rows, args.format, artifacts.path(out_dir, f"metrics_{period}.{args.format}"))
        _reports.emit_table(tail_rows, args.format, artifacts.path(out_dir, f"powerlaw_{period}.{args.format}"))
    print(f"metrics: wrote reports for {len(multiplexes)} period(s) to {out_dir}")
    return 0


def cmd_similarity(args, artifacts: _Artifacts) -> int:
    multiplexes = _load_input(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    null = args.null if args.null != "none" else None
    # layers against each other inside every period
    for period, m in sorted(multiplexes.items()):
        if len(m.layers) >= 2:
            items = [(name, g) for name, g in m.layers.items()]
            matrix = _similarity.similarity_matrix(
                items, args.measure, args.mode,
                null=null, samples=args.samples, seed=args.seed,
            )
            _reports.emit_similarity(
                matrix, args.format,
                artifacts.path(out_dir, f"similarity_layers_{period}_{args.measure}_{args.mode}.{args.format}"),
                percent=args.percent,
            )
    # every layer against itself across periods
    periods = sorted(multiplexes)
    if len(periods) >= 2:
        layer_names = sorted({n for m in multiplexes.values() for n in m.layer_names})
        for name in layer_names:
            items = [
                (p, multiplexes[p].layers[name]) for p in periods if name in multiplexes[p].layers
            ]
            if len(items) < 2:
                continue
            matrix = _similarity.similarity_matrix(
                items, args.measure, args.mode,
                null=null, samples=args.samples, seed=args.seed,
            )
            _reports.emit_similarity(
                matrix, args.format,
                artifacts.path(out_dir, f"similarity_periods_{name}_{args.measure}_{args.mode}.{args.format}"),
                percent=args.percent,
            )
    print(f"similarity: wrote matrices to {out_dir}")
    return 0


def cmd_fit(args, artifacts: _Artifacts) -> int:
    multiplexes = _load_input(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for period, m in sorted(multiplexes.items()):
        for name, g in _layer_items(m):
            dwcm = fit_dwcm(g, tol=args.tol)
            path = artifacts.path(out_dir, f"fit_{period}_{name}.json")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(dwcm.to_json())
                fh.write("\n")
    print(f"fit: wrote ensemble fits to {out_dir}")
    return 0


def cmd_ensemble(args, artifacts: _Artifacts) -> int:
    multiplexes = _load_input(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for period, m in sorted(multiplexes.items()):
        for name, g in _layer_items(m):
            if args.null == "dbcm":
                null = fit_dbcm_graph(g, tol=args.tol)
                names = BINARY_METRICS
            else:
                null = fit_dwcm(g, tol=args.tol)
                names = BINARY_METRICS + WEIGHTED_METRICS
            reports = ensemble_stats(
                g, null, metric_names=names, samples=args.samples, seed=args.seed
            )
            _reports.emit_ensemble(
                reports, args.format,
                artifacts.path(out_dir, f"ensemble_{period}_{name}_{args.null}.{args.format}"),
            )
    print(f"ensemble: wrote reports to {out_dir}")
    return 0


def cmd_motifs(args, artifacts: _Artifacts) -> int:
    multiplexes = _load_input(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    null = "degree-switch" if args.null == "degree" else "reciprocal-switch"
    for period, m in sorted(multiplexes.items()):
        for name, g in _layer_items(m):
            report = motif_zscores(g, null=null, samples=args.samples, seed=args.seed)
            _reports.emit_motifs(
                report, args.format,
                artifacts.path(out_dir, f"motifs_{period}_{name}_{args.null}.{args.format}"),
            )
    print(f"motifs: wrote z-scores to {out_dir}")
    return 0


# --------------------------------------------------------------------------
# Parser / dispatch
# --------------------------------------------------------------------------


def _add_common_io(p: argparse.ArgumentParser, needs_input: bool = True) -> None:
    if needs_input:
        p.add_argument("--input", required=True, help="edge-list CSV (optionally .gz)")
        p.add_argument("--groups", help="bank,group CSV for consolidation")
        p.add_argument("--manifest", help="JSON manifest declaring the layer vocabulary")
        p.add_argument("--layers", help="comma-separated layer selection")
    p.add_argument("--out", required=True, help="output directory (or file for synth)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ibnet",
        description="Multiplex interbank network analysis toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic multiplex edge list")
    p.add_argument("--nodes", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--overlap", type=float, default=0.7)
    p.add_argument("--weight-scale", type=float, default=10.0)
    p.add_argument("--period", default="2012")
    p.add_argument(
        "--layer-spec",
        help="name:density[:reciprocity[:participation]],... (default: five stylized layers)",
    )
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("ingest", help="validate, consolidate, summarize volumes")
    _add_common_io(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("metrics", help="per-layer summary statistics and plot data")
    _add_common_io(p)
    p.add_argument("--seed", type=int, default=0, help="permutation-test seed")
    p.add_argument("--nperm", type=int, default=1000, help="permutation draws (0 disables)")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("similarity", help="pairwise layer/period similarity matrices")
    _add_common_io(p)
    p.add_argument("--measure", choices=_similarity.MEASURES, default="jaccard")
    p.add_argument("--mode", choices=_similarity.MODES, default="union")
    p.add_argument("--null", choices=("none", "dbcm", "density"), default="none")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--percent", action="store_true", help="percent formatting in CSV output")
    p.set_defaults(func=cmd_similarity)

    p = sub.add_parser("fit", help="fit degree- and strength-constrained ensembles")
    _add_common_io(p)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("ensemble", help="observed metrics vs canonical ensembles")
    _add_common_io(p)
    p.add_argument("--null", choices=("dbcm", "dwcm"), default="dbcm")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("motifs", help="triad z-scores against switching nulls")
    _add_common_io(p)
    p.add_argument("--null", choices=("degree", "reciprocal"), default="degree")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_motifs)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    artifacts = _Artifacts()
    try:
        return args.func(args, artifacts)
    except IbnetError as exc:
        artifacts.discard_all()
        print(f"ibnet {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        artifacts.discard_all()
        print(f"ibnet {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
