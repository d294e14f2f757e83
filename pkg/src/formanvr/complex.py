"""
Point clouds, distance matrices and Vietoris-Rips filtrations.

Point clouds and distance matrices are plain ``numpy`` arrays; the helpers
``as_point_cloud`` and ``as_distance_matrix`` validate them. A filtration is
the list of all cliques of the thresholded distance graph, sorted by
(diameter, dimension, node order).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence, Union

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import FRCInputError, InvariantViolation

Metric = Union[str, Callable[[np.ndarray, np.ndarray], float]]


def as_point_cloud(points) -> np.ndarray:
    """Return ``points`` as a finite ``(m, n)`` float array, m, n >= 1."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise FRCInputError(f"point cloud must be a non-empty m x n matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        bad = np.argwhere(~np.isfinite(arr))[0]
        raise FRCInputError(f"non-finite coordinate at row {bad[0]}, column {bad[1]}")
    return arr


def as_distance_matrix(dist, atol: float = 1e-9) -> np.ndarray:
    """Validate a square, symmetric, zero-diagonal, non-negative finite matrix."""
    arr = np.asarray(dist, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise FRCInputError(f"distance matrix must be square and non-empty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise FRCInputError("distance matrix contains non-finite entries")
    if np.any(arr < 0):
        raise FRCInputError("distance matrix contains negative entries")
    if np.any(np.abs(np.diag(arr)) > atol):
        raise FRCInputError("distance matrix diagonal must be zero")
    if not np.allclose(arr, arr.T, rtol=0.0, atol=atol):
        raise FRCInputError("distance matrix is not symmetric")
    # exact symmetry so that diameters never depend on index order
    arr = np.triu(arr, 1)
    return arr + arr.T


def pairwise_distances(points, metric: Metric = "euclidean") -> np.ndarray:
    """Pairwise distance matrix of a point cloud.

    ``metric`` is anything :func:`scipy.spatial.distance.pdist` accepts: a
    metric name or a callable on two coordinate vectors. Euclidean is the
    default.
    """
    cloud = as_point_cloud(points)
    if cloud.shape[0] == 1:
        return np.zeros((1, 1))
    return squareform(pdist(cloud, metric=metric))


def diameter(nodes: Iterable[int], dist) -> float:
    """Largest pairwise distance among ``nodes`` (0 for a single node)."""
    nodes = list(nodes)
    m = len(dist)
    if not nodes:
        raise FRCInputError("diameter of an empty node set is undefined")
    for v in nodes:
        if not 0 <= v < m:
            raise FRCInputError(f"node id {v} out of range for {m} nodes")
    best = 0.0
    for i, u in enumerate(nodes):
        for v in nodes[i + 1:]:
            best = max(best, float(dist[u][v]))
    return best


class Simplex(NamedTuple):
    """A face: ascending node ids plus its filtration weight (the diameter)."""

    nodes: tuple
    weight: float

    @property
    def dim(self) -> int:
        return len(self.nodes) - 1


def filtration_key(face: Simplex):
    return (face.weight, len(face.nodes), face.nodes)


@dataclass
class Filtration:
    """Weight-sorted sequence of faces of a Vietoris-Rips complex.

    ``d_max`` is the highest dimension curvature is requested for; the face
    list may go one dimension higher (see ``enumerate_vr_filtration``).
    """

    faces: list
    n_nodes: int
    d_max: int
    max_dist: float = math.inf

    @property
    def top_dim(self) -> int:
        return max((f.dim for f in self.faces), default=0)

    def prefix(self, cutoff: float) -> list:
        """Faces with weight <= cutoff."""
        return [f for f in self.faces if f.weight <= cutoff]

    def weights(self) -> list:
        """Distinct face weights in ascending order."""
        return sorted({f.weight for f in self.faces})

    def validate(self) -> None:
        """Check ordering, closure and weight invariants; raise on the first breach."""
        seen = {}
        prev = None
        for pos, face in enumerate(self.faces):
            nodes = face.nodes
            if any(b <= a for a, b in zip(nodes, nodes[1:])):
                raise InvariantViolation(f"face {nodes} is not strictly ascending")
            if not nodes or nodes[0] < 0 or nodes[-1] >= self.n_nodes:
                raise InvariantViolation(f"face {nodes} has out-of-range nodes")
            if face.weight > self.max_dist:
                raise InvariantViolation(f"face {nodes} exceeds max_dist")
            key = filtration_key(face)
            if prev is not None and key < prev:
                raise InvariantViolation(f"face {nodes} at position {pos} is out of order")
            prev = key
            if len(nodes) > 1:
                for i in range(len(nodes)):
                    sub = nodes[:i] + nodes[i + 1:]
                    w = seen.get(sub)
                    if w is None:
                        raise InvariantViolation(f"face {nodes} precedes its boundary face {sub}")
                    if w > face.weight:
                        raise InvariantViolation(f"face {nodes} is lighter than its boundary {sub}")
            seen[nodes] = face.weight


def _enumerate_cliques(rows: Sequence[Sequence[float]], max_size: int, max_dist: float) -> list:
    m = len(rows)
    up = [[j for j in range(i + 1, m) if rows[i][j] <= max_dist and rows[i][j] != math.inf]
          for i in range(m)]
    up_sets = [set(a) for a in up]
    faces = [Simplex((i,), 0.0) for i in range(m)]
    append = faces.append

    def expand(clique, weight, cand):
        # cand: ascending common neighbours of the clique, all > clique[-1]
        grow = len(clique) + 1 < max_size
        for k, v in enumerate(cand):
            row = rows[v]
            w = weight
            for u in clique:
                if row[u] > w:
                    w = row[u]
            new = clique + (v,)
            append(Simplex(new, w))
            if grow:
                nbrs = up_sets[v]
                nxt = [u for u in cand[k + 1:] if u in nbrs]
                if nxt:
                    expand(new, w, nxt)

    if max_size >= 2:
        for i in range(m):
            expand((i,), 0.0, up[i])
    faces.sort(key=filtration_key)
    return faces


def enumerate_vr_filtration(dist, d_max: int, max_dist: float = math.inf, *,
                            cofaces: bool = True) -> Filtration:
    """All cliques of diameter <= ``max_dist``, sorted by (weight, dim, nodes).

    Faces go up to dimension ``d_max + 1`` so that the top requested dimension
    can see its cofaces; pass ``cofaces=False`` to stop at ``d_max`` (the
    incremental engine derives coface counts from neighbourhoods alone).
    """
    if not isinstance(d_max, (int, np.integer)) or d_max < 1:
        raise FRCInputError(f"d_max must be an integer >= 1, got {d_max!r}")
    if math.isnan(max_dist) or max_dist < 0:
        raise FRCInputError(f"max_dist must be non-negative, got {max_dist!r}")
    D = as_distance_matrix(dist)
    top = d_max + 1 if cofaces else d_max
    faces = _enumerate_cliques(D.tolist(), top + 1, max_dist)
    return Filtration(faces, len(D), int(d_max), max_dist)


def graph_filtration(n_nodes: int, edges: dict, d_max: int, max_dist: float = math.inf, *,
                     cofaces: bool = True) -> Filtration:
    """Clique filtration of a weighted graph; absent pairs are never joined.

    ``edges`` maps node pairs ``(i, j)`` to non-negative weights.
    """
    if d_max < 1:
        raise FRCInputError(f"d_max must be >= 1, got {d_max!r}")
    D = np.full((n_nodes, n_nodes), math.inf)
    np.fill_diagonal(D, 0.0)
    for (i, j), w in edges.items():
        if i == j or not (0 <= i < n_nodes and 0 <= j < n_nodes):
            raise FRCInputError(f"bad edge {(i, j)}")
        if not w >= 0 or math.isinf(w):
            raise FRCInputError(f"edge {(i, j)} has invalid weight {w!r}")
        D[i, j] = D[j, i] = w
    top = d_max + 1 if cofaces else d_max
    faces = _enumerate_cliques(D.tolist(), top + 1, max_dist)
    return Filtration(faces, n_nodes, d_max, max_dist)


def format_filtration_rows(filt: Filtration):
    """Rows of the debug dump: ``weight, dim, node_ids`` with ``;``-joined ids."""
    for f in filt.faces:
        yield repr(float(f.weight)), str(f.dim), ";".join(map(str, f.nodes))
