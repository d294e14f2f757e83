"""
Data geometrization: replace each observation's feature row by its local
Forman-Ricci curvature curve over a grid of cutoff distances.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .complex import as_distance_matrix, as_point_cloud, enumerate_vr_filtration, pairwise_distances
from .engine import cutoff_grid, iter_samples
from .errors import FRCInputError
from .io import fmt


@dataclass
class GeometrizedTable:
    """``values[i][j]`` is the local d-curvature of observation i at ``cutoffs[j]``."""

    observations: list
    cutoffs: list
    values: list
    dim: int
    precision: int = 2
    labels: Optional[list] = None

    def as_array(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.values])

    def column_sums(self) -> list:
        return [sum((row[j] for row in self.values), Fraction(0)) for j in range(len(self.cutoffs))]

    def header(self) -> list:
        cols = ["observation"]
        if self.labels is not None:
            cols.append("label")
        return cols + [f"eps_{c:.{self.precision}f}" for c in self.cutoffs]

    def rows(self):
        for i, obs in enumerate(self.observations):
            row = [str(obs)]
            if self.labels is not None:
                row.append(self.labels[i])
            yield row + [fmt(v) for v in self.values[i]]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(self.header())
            w.writerows(self.rows())


def standardize(points: np.ndarray) -> np.ndarray:
    """Z-score each column (sample std); constant columns are only centred."""
    sd = points.std(axis=0, ddof=1) if len(points) > 1 else np.ones(points.shape[1])
    sd = np.where(sd > 0, sd, 1.0)
    return (points - points.mean(axis=0)) / sd


def geometrize(data, d: int = 1, precision: int = 2, max_dist: Optional[float] = None, *,
               kind: str = "points", cutoffs: Optional[Sequence[float]] = None,
               metric="euclidean", normalize: bool = False,
               observations: Optional[list] = None, labels: Optional[list] = None) -> GeometrizedTable:
    """Local d-curvature of every observation on a cutoff grid.

    ``data`` is a point cloud (``kind="points"``) or a distance matrix
    (``kind="distances"``). The grid is ``cutoffs`` when given, otherwise
    ``0, 10^-precision, ...`` up to ``max_dist`` (or the largest distance).
    """
    if not isinstance(d, (int, np.integer)) or d < 1:
        raise FRCInputError(f"dimension must be an integer >= 1, got {d!r}")
    if kind == "points":
        pts = as_point_cloud(data)
        if normalize:
            pts = standardize(pts)
        dist = pairwise_distances(pts, metric)
    elif kind == "distances":
        if normalize:
            raise FRCInputError("normalization applies to point clouds only")
        dist = as_distance_matrix(data)
    else:
        raise FRCInputError(f"unknown input kind {kind!r}")
    m = len(dist)
    if cutoffs is None:
        end = float(dist.max()) if max_dist is None or not math.isfinite(max_dist) else max_dist
        cutoffs = cutoff_grid(precision, end)
    else:
        cutoffs = sorted(float(c) for c in cutoffs)
    top = max(cutoffs, default=0.0) if max_dist is None else max_dist
    filt = enumerate_vr_filtration(dist, d, top, cofaces=False)
    columns = [snap.node_frc(d) for _, snap in iter_samples(filt, cutoffs, d)]
    values = [[col[i] for col in columns] for i in range(m)]
    return GeometrizedTable(
        observations=list(range(m)) if observations is None else list(observations),
        cutoffs=list(cutoffs),
        values=values,
        dim=d,
        precision=precision,
        labels=labels,
    )
