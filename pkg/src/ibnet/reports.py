"""Deterministic CSV/JSON emission for metric, similarity, and ensemble reports.

Floats are written with repr (shortest round-tripping form), rows in a
fixed order, JSON with sorted keys — identical inputs give byte-identical
files.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any, Mapping, Sequence

from .nullmodels import EnsembleReport, MotifReport
from .similarity import SimilarityMatrix


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path: str | Path, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def write_json(path: str | Path, payload: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2, allow_nan=False)
        fh.write("\n")


def _round_trip_safe(value: float | None) -> float | None:
    if value is None:
        return None
    if value != value:  # NaN -> null in JSON
        return None
    return value


ENSEMBLE_COLUMNS = ("metric", "observed", "mean", "sd", "p_lower", "p_upper", "z",
                    "samples", "valid_samples", "degenerate")


def ensemble_rows(reports: Sequence[EnsembleReport]) -> list[list[Any]]:
    rows = []
    for r in reports:
        rows.append([
            r.metric, r.observed,
            _round_trip_safe(r.mean), _round_trip_safe(r.sd),
            r.p_lower, r.p_upper, r.z, r.samples, r.valid_samples, r.degenerate,
        ])
    return rows


def emit_ensemble(reports: Sequence[EnsembleReport], fmt: str, path: str | Path) -> None:
    if fmt == "csv":
        write_csv(path, ENSEMBLE_COLUMNS, ensemble_rows(reports))
    else:
        write_json(path, [
            {k: _round_trip_safe(v) if isinstance(v, float) else v
             for k, v in zip(ENSEMBLE_COLUMNS, row)}
            for row in ensemble_rows(reports)
        ])


MOTIF_COLUMNS = ("triad", "label", "observed", "mean", "sd", "z")


def emit_motifs(report: MotifReport, fmt: str, path: str | Path) -> None:
    rows = [[r["triad"], r["label"], r["observed"], r["mean"], r["sd"], r["z"]]
            for r in report.as_rows()]
    if fmt == "csv":
        write_csv(path, MOTIF_COLUMNS, rows)
    else:
        write_json(path, report.as_rows())


SIMILARITY_COLUMNS = ("a", "b", "measure", "mode", "value", "p_value", "null", "samples")


def emit_similarity(matrix: SimilarityMatrix, fmt: str, path: str | Path,
                    percent: bool = False) -> None:
    if fmt == "csv":
        rows = []
        for r in matrix.reports:
            value = f"{100.0 * r.value:.1f}%" if percent else r.value
            rows.append([r.label_a, r.label_b, r.measure, r.mode, value,
                         r.p_value, r.null, r.samples])
        write_csv(path, SIMILARITY_COLUMNS, rows)
    else:
        write_json(path, [
            {
                "a": r.label_a, "b": r.label_b, "measure": r.measure, "mode": r.mode,
                "value": r.value, "p_value": r.p_value, "null": r.null, "samples": r.samples,
            }
            for r in matrix.reports
        ])


def emit_table(rows: Sequence[Mapping[str, Any]], fmt: str, path: str | Path) -> None:
    """Generic list-of-dicts table; column order = first row's key order."""
    if not rows:
        write_csv(path, [], []) if fmt == "csv" else write_json(path, [])
        return
    header = list(rows[0].keys())
    if fmt == "csv":
        write_csv(path, header, [[row.get(c) for c in header] for row in rows])
    else:
        write_json(path, [
            {k: _round_trip_safe(v) if isinstance(v, float) else v for k, v in row.items()}
            for row in rows
        ])
