"""CSV / JSON reading and writing."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .data import TimeSeriesSet
from .exceptions import DataFileError

__all__ = [
    "load_csv",
    "write_csv",
    "fill_missing",
    "graph_report",
    "write_graph_json",
    "write_pvalue_csv",
    "load_truth",
    "fmt_float",
]

MISSING_TOKENS = {"", "nan", "na", "n/a", "null", "none"}


def fmt_float(v: float) -> str:
    """Shortest round-trip representation (never fewer digits than needed)."""
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    return repr(float(v))


def fill_missing(col: np.ndarray) -> np.ndarray:
    """Linear interpolation inside, nearest finite value at the ends."""
    ok = np.isfinite(col)
    if ok.all():
        return col.copy()
    idx = np.arange(col.size)
    return np.interp(idx, idx[ok], col[ok])


def load_csv(path, interpolate_missing: bool = True) -> TimeSeriesSet:
    """Read a header + one-row-per-time-step CSV.

    Empty cells and ``NaN``/``NA``/``null`` markers are missing values. With
    ``interpolate_missing`` they are filled by :func:`fill_missing`;
    otherwise they stay NaN. ``meta["missing"]`` maps each column to its
    missing count.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFileError(f"{path}: file is empty") from None
        names = [h.strip() for h in header]
        if not names or any(not n for n in names):
            raise DataFileError(f"{path}: header must name every column", row=1)
        rows = []
        for r, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(names):
                raise DataFileError(
                    f"{path}: row {r} has {len(row)} cells, expected {len(names)}", row=r
                )
            vals = []
            for c, cell in enumerate(row):
                tok = cell.strip()
                if tok.lower() in MISSING_TOKENS:
                    vals.append(math.nan)
                    continue
                try:
                    v = float(tok)
                except ValueError:
                    raise DataFileError(
                        f"{path}: non-numeric cell {cell!r} at row {r}, column {names[c]!r}",
                        row=r,
                        column=names[c],
                    ) from None
                if math.isinf(v):
                    raise DataFileError(
                        f"{path}: infinite value at row {r}, column {names[c]!r}",
                        row=r,
                        column=names[c],
                    )
                vals.append(v)
            rows.append(vals)
    if not rows:
        raise DataFileError(f"{path}: no data rows")
    values = np.array(rows, dtype=float)
    missing = {}
    for j, name in enumerate(names):
        col = values[:, j]
        n_miss = int(np.sum(~np.isfinite(col)))
        missing[name] = n_miss
        if n_miss == col.size:
            raise DataFileError(f"{path}: column {name!r} has no usable values", column=name)
        if interpolate_missing and n_miss:
            values[:, j] = fill_missing(col)
    return TimeSeriesSet(values, tuple(names), {"source": str(path), "missing": missing,
                                                "interpolated": bool(interpolate_missing)})


def write_csv(ts: TimeSeriesSet, path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ts.names)
        for row in ts.values:
            w.writerow([fmt_float(v) for v in row])


def graph_report(graph, extra_meta: dict | None = None) -> dict:
    """Stable JSON document for a causal graph."""
    meta = dict(graph.meta)
    if extra_meta:
        meta.update(extra_meta)
    d = graph.to_dict()
    return {
        "names": d["names"],
        "alpha": graph.alpha,
        "window": meta.get("window"),
        "stride": meta.get("stride"),
        "max_lag": meta.get("max_lag"),
        "adjacency": d["adjacency"],
        "p_values": d["p_values"],
        "metadata": meta,
    }


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (set, tuple)):
        return list(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def dump_json(obj, path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, default=_json_default, allow_nan=False)
        fh.write("\n")


def write_graph_json(graph, path, extra_meta: dict | None = None) -> dict:
    report = graph_report(graph, extra_meta)
    dump_json(report, path)
    return report


def write_pvalue_csv(graph, path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([""] + list(graph.names))
        for name, row in zip(graph.names, graph.p_values):
            w.writerow([name] + [fmt_float(v) for v in row])


def load_truth(path) -> np.ndarray:
    """Ground-truth adjacency from JSON (``{"adjacency": [[...]]}``) or a 0/1 CSV."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        with path.open(encoding="utf-8") as fh:
            doc = json.load(fh)
        m = doc["adjacency"] if isinstance(doc, dict) else doc
        return np.asarray(m, dtype=int)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row]

    def numeric(cell):
        try:
            float(cell)
        except ValueError:
            return False
        return True

    # optional header row and name column
    if rows and not all(numeric(c) for c in rows[0] if c.strip()):
        rows = rows[1:]
    if rows and not numeric(rows[0][0]):
        rows = [r[1:] for r in rows]
    try:
        m = np.array([[int(float(c)) for c in r] for r in rows], dtype=int)
    except ValueError:
        raise DataFileError(f"{path}: ground truth must be a 0/1 matrix") from None
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DataFileError(f"{path}: ground truth must be square, got shape {m.shape}")
    return m
