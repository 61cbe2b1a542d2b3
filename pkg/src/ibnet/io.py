"""Edge-list ingestion and serialization.

Wire format: UTF-8 CSV with header ``period,layer,lender,borrower,weight``
(column order free, extra columns ignored), ``.`` decimal separator,
optionally gzip-compressed. Duplicate (period, layer, lender, borrower)
rows sum their weights — the rows are outstanding-balance records.

A JSON manifest may declare the layer vocabulary, e.g.
``{"layers": ["U_OVN", "U_ST", "U_LT", "S_ST", "S_LT"]}``; when supplied,
unknown layer names are rejected at load time.
"""

from __future__ import annotations

import csv
import gzip
import io as _stdio
import json
from pathlib import Path
from typing import IO, Iterable, Sequence

from .errors import SchemaError
from .graphs import EdgeRecord, Multiplex, WeightedDigraph

REQUIRED_COLUMNS = ("period", "layer", "lender", "borrower", "weight")

#: The five contract segments used throughout: unsecured overnight,
#: unsecured short/long term, secured short/long term.
DEFAULT_LAYERS = ("U_OVN", "U_ST", "U_LT", "S_ST", "S_LT")


def _open_text(source: str | Path | IO[bytes]) -> IO[str]:
    if isinstance(source, (str, Path)):
        raw = Path(source).open("rb")
    else:
        raw = source
    head = raw.read(2)
    raw.seek(raw.tell() - len(head))
    if head == b"\x1f\x8b":
        return _stdio.TextIOWrapper(gzip.GzipFile(fileobj=raw), encoding="utf-8", newline="")
    return _stdio.TextIOWrapper(raw, encoding="utf-8", newline="")


def load_layer_manifest(path: str | Path) -> tuple[str, ...]:
    with open(path, encoding="utf-8") as fh:
        spec = json.load(fh)
    layers = spec.get("layers")
    if not layers or not all(isinstance(x, str) for x in layers):
        raise SchemaError(f"manifest {path} must carry a non-empty 'layers' list")
    return tuple(layers)


def load_edge_list(
    source: str | Path | IO[bytes],
    layer_vocabulary: Sequence[str] | None = None,
) -> dict[str, Multiplex]:
    """Parse an edge-list CSV into one Multiplex per period.

    The node universe of each period is the union of all lenders and
    borrowers appearing in any layer of that period, so individual layers
    may contain isolated nodes. Errors carry the 1-based line number of
    the offending row.
    """
    vocab = set(layer_vocabulary) if layer_vocabulary is not None else None
    fh = _open_text(source)
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("empty edge list: missing header") from None
    header = [h.strip() for h in header]
    missing = [c for c in REQUIRED_COLUMNS if c not in header]
    if missing:
        raise SchemaError(f"header is missing column(s) {missing}; got {header}")
    col = {c: header.index(c) for c in REQUIRED_COLUMNS}

    # period -> layer -> (lender, borrower) -> weight
    sums: dict[str, dict[str, dict[tuple[str, str], float]]] = {}
    nodes: dict[str, set[str]] = {}
    layers_seen: dict[str, list[str]] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) < len(header):
            raise SchemaError(f"malformed row at line {lineno}: expected {len(header)} fields, got {len(row)}")
        period = row[col["period"]].strip()
        layer = row[col["layer"]].strip()
        lender = row[col["lender"]].strip()
        borrower = row[col["borrower"]].strip()
        raw_w = row[col["weight"]].strip()
        if not period or not layer or not lender or not borrower:
            raise SchemaError(f"malformed row at line {lineno}: empty field")
        if vocab is not None and layer not in vocab:
            raise SchemaError(f"unknown layer {layer!r} at line {lineno}")
        try:
            weight = float(raw_w)
        except ValueError:
            raise SchemaError(f"malformed weight {raw_w!r} at line {lineno}") from None
        if not weight >= 0:  # also rejects NaN
            raise SchemaError(f"negative weight at line {lineno}")
        per = sums.setdefault(period, {})
        lay = per.setdefault(layer, {})
        key = (lender, borrower)
        lay[key] = lay.get(key, 0.0) + weight
        nodes.setdefault(period, set()).update((lender, borrower))
        if layer not in layers_seen.setdefault(period, []):
            layers_seen[period].append(layer)

    out: dict[str, Multiplex] = {}
    for period in sorted(sums):
        universe = tuple(sorted(nodes[period]))
        idx = {v: i for i, v in enumerate(universe)}
        layer_order = layers_seen[period]
        if vocab is not None:
            # declared order wins for declared layers
            declared = [l for l in layer_vocabulary if l in sums[period]]
            layer_order = declared + [l for l in layer_order if l not in declared]
        layers = {}
        for lname in layer_order:
            edges = {
                (idx[u], idx[v]): w
                for (u, v), w in sums[period][lname].items()
                if w > 0
            }
            layers[lname] = WeightedDigraph(universe, edges)
        out[period] = Multiplex(period=period, layers=layers)
    return out


def _format_weight(w: float) -> str:
    # repr() is the shortest string that round-trips the float exactly
    return repr(w)


def iter_edge_records(m: Multiplex) -> "Iterable[EdgeRecord]":
    """Flatten a multiplex into wire-format rows, deterministically ordered."""
    for lname in m.layer_names:
        for u, v, w in m.layers[lname].iter_edges():
            yield EdgeRecord(period=m.period, layer=lname, lender=u, borrower=v, weight=w)


def save_edge_list(multiplexes: Iterable[Multiplex] | Multiplex, path: str | Path) -> None:
    """Serialize multiplex(es) back to the CSV wire format (deterministic order)."""
    if isinstance(multiplexes, Multiplex):
        multiplexes = [multiplexes]
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "wt", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(REQUIRED_COLUMNS)
        for m in sorted(multiplexes, key=lambda m: m.period):
            for rec in iter_edge_records(m):
                writer.writerow(
                    [rec.period, rec.layer, rec.lender, rec.borrower, _format_weight(rec.weight)]
                )


def load_group_map(path: str | Path) -> dict[str, str]:
    """Two-column CSV ``bank,group`` (header optional)."""
    mapping: dict[str, str] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if lineno == 1 and [c.strip().lower() for c in row[:2]] == ["bank", "group"]:
                continue
            if len(row) < 2:
                raise SchemaError(f"group map: malformed row at line {lineno}")
            mapping[row[0].strip()] = row[1].strip()
    return mapping
