"""CSV readers with line-numbered diagnostics, and series writers."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np

from .errors import CSVFormatError


def fmt(value) -> str:
    """Shortest round-trip text for a number (``repr`` of the float)."""
    return repr(float(value))


def _parse_float(text: str) -> float:
    v = float(text)
    if not math.isfinite(v):
        raise ValueError(f"non-finite value {text!r}")
    return v


def _records(path: Path) -> list:
    with path.open(newline="") as fh:
        return [(n, rec) for n, rec in enumerate(csv.reader(fh), start=1)
                if rec and any(c.strip() for c in rec)]


def read_points_csv(path, header: bool = False, label_column: Optional[Union[str, int]] = None,
                    drop_invalid: bool = False):
    """Read a numeric table, one observation per row.

    Returns ``(points, labels, row_ids)``. ``label_column`` (a header name or
    0-based index) is split off and returned unchanged as strings. With
    ``drop_invalid`` rows holding missing or non-numeric fields are skipped;
    otherwise they raise :class:`CSVFormatError` naming the line.
    ``row_ids`` are the 0-based positions of the kept rows among data rows.
    """
    path = Path(path)
    recs = _records(path)
    if not recs:
        raise CSVFormatError(path, 1, "empty file")
    label_idx = None
    if header:
        lineno, head = recs.pop(0)
        width = len(head)
        if label_column is not None:
            label_idx = _resolve_label(path, lineno, head, label_column)
    else:
        width = len(recs[0][1]) if recs else 0
        if label_column is not None:
            if not str(label_column).lstrip("-").isdigit():
                raise CSVFormatError(path, recs[0][0], f"label column {label_column!r} needs a header row")
            label_idx = int(label_column)
    if label_idx is not None and not 0 <= label_idx < width:
        raise CSVFormatError(path, recs[0][0] if recs else 1, f"label column {label_idx} out of range")
    rows, labels, ids = [], [], []
    for pos, (lineno, rec) in enumerate(recs):
        if len(rec) != width:
            if drop_invalid:
                continue
            raise CSVFormatError(path, lineno, f"expected {width} fields, found {len(rec)}")
        label = None
        if label_idx is not None:
            label = rec[label_idx]
            rec = rec[:label_idx] + rec[label_idx + 1:]
        try:
            values = [_parse_float(c) for c in rec]
        except ValueError as exc:
            if drop_invalid:
                continue
            raise CSVFormatError(path, lineno, f"non-numeric field: {exc}") from None
        rows.append(values)
        labels.append(label)
        ids.append(pos)
    if not rows:
        raise CSVFormatError(path, recs[-1][0] if recs else 1, "no usable numeric data rows")
    if not rows[0]:
        raise CSVFormatError(path, 1, "no numeric columns")
    return np.array(rows, dtype=float), (labels if label_idx is not None else None), ids


def _resolve_label(path, lineno, header_rec, label_column) -> int:
    if isinstance(label_column, int) or str(label_column).lstrip("-").isdigit():
        return int(label_column)
    names = [c.strip() for c in header_rec]
    if label_column not in names:
        raise CSVFormatError(path, lineno, f"label column {label_column!r} not in header {names}")
    return names.index(label_column)


def read_distance_csv(path, header: bool = False) -> np.ndarray:
    """Read a square distance matrix.

    A header row is skipped when ``header`` is set. A leading label column is
    detected when every row has one more field than there are rows.
    """
    path = Path(path)
    recs = _records(path)
    if header:
        recs = recs[1:]
    if not recs:
        raise CSVFormatError(path, 1, "no data rows")
    m = len(recs)
    label_col = all(len(r) == m + 1 for _, r in recs)
    out = []
    for lineno, rec in recs:
        if label_col:
            rec = rec[1:]
        if len(rec) != m:
            raise CSVFormatError(path, lineno, f"expected {m} fields for a {m}x{m} matrix, found {len(rec)}")
        try:
            out.append([_parse_float(c) for c in rec])
        except ValueError as exc:
            raise CSVFormatError(path, lineno, f"non-numeric field: {exc}") from None
    return np.array(out, dtype=float)


def write_points_csv(path, points, header: Optional[Iterable[str]] = None) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header is not None:
            w.writerow(list(header))
        for row in np.asarray(points, dtype=float):
            w.writerow([fmt(v) for v in row])


SERIES_HEADER = ("cutoff", "dim", "face_density", "avg_frc")
NODE_HEADER = ("cutoff", "dim", "node_id", "local_frc")


class SeriesWriter:
    """Streams grid snapshots to the series and node-series outputs.

    CSV rows are flushed as each grid point is written; JSON is written on
    ``close`` (a JSON document cannot be streamed row by row and stay valid).
    """

    def __init__(self, series_path, nodes_path, d_max: int, fmt_kind: str = "csv"):
        self.d_max = d_max
        self.kind = fmt_kind
        self.series_path, self.nodes_path = Path(series_path), Path(nodes_path)
        if fmt_kind == "csv":
            self._sf = self.series_path.open("w", newline="")
            self._nf = self.nodes_path.open("w", newline="")
            self._sw = csv.writer(self._sf, lineterminator="\n")
            self._nw = csv.writer(self._nf, lineterminator="\n")
            self._sw.writerow(SERIES_HEADER)
            self._nw.writerow(NODE_HEADER)
        elif fmt_kind == "json":
            self._series, self._nodes = [], []
        else:
            raise ValueError(f"unknown output format {fmt_kind!r}")

    def write(self, cutoff: float, snap) -> None:
        for d in range(1, self.d_max + 1):
            dens, avg = snap.face_density(d), snap.avg_frc(d)
            local = snap.node_frc(d)
            if self.kind == "csv":
                self._sw.writerow((fmt(cutoff), d, fmt(dens), fmt(avg)))
                self._nw.writerows((fmt(cutoff), d, x, fmt(v)) for x, v in enumerate(local))
            else:
                self._series.append({"cutoff": float(cutoff), "dim": d,
                                     "face_density": float(dens), "avg_frc": float(avg)})
                self._nodes.extend({"cutoff": float(cutoff), "dim": d, "node_id": x,
                                    "local_frc": float(v)} for x, v in enumerate(local))
        if self.kind == "csv":
            self._sf.flush()
            self._nf.flush()

    def close(self) -> None:
        if self.kind == "csv":
            self._sf.close()
            self._nf.close()
        else:
            self.series_path.write_text(json.dumps({"columns": list(SERIES_HEADER), "rows": self._series}, indent=1))
            self.nodes_path.write_text(json.dumps({"columns": list(NODE_HEADER), "rows": self._nodes}, indent=1))

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
