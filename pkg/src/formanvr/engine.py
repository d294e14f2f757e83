"""
Incremental Forman-Ricci curvature over a Vietoris-Rips filtration.

Faces are inserted one at a time in filtration order. For each dimension d
the engine keeps, for every (d-1)-face gamma, the node set ``pi[gamma]`` of
nodes x such that gamma + {x} is an inserted d-face. The curvature of a new
d-face alpha is

    F(alpha) = (d+2) |intersection of pi[gamma]| + 2(d+1) - sum |pi[gamma]|

over its boundary faces gamma, and every pre-existing neighbour
gamma + {x} changes by +(d+1) if x closes a (d+1)-clique with alpha and by
-1 otherwise. Node accumulators hold sum over faces containing x of F, so
global and local curvatures are exact rationals obtained only at snapshot
time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Iterator, Optional, Sequence

from .complex import Filtration, Simplex
from .errors import FRCInputError, InvariantViolation


def delta(x_forms_higher_face: bool, d: int) -> int:
    """Curvature change of an existing neighbour when a new d-face arrives."""
    return d + 1 if x_forms_higher_face else -1


class NeighbourhoodIndex:
    """Per-dimension map from a (d-1)-face to its neighbour node set."""

    def __init__(self, d_max: int):
        self.d_max = d_max
        self.maps = {d: {} for d in range(1, d_max + 1)}

    def pi(self, gamma: tuple, d: int) -> frozenset:
        """Neighbour set of ``gamma`` among inserted d-faces (empty if unseen)."""
        return frozenset(self.maps[d].get(tuple(gamma), ()))

    def add(self, alpha: tuple) -> list:
        """Register d-face ``alpha``; return its boundary faces and their live sets."""
        table = self.maps[len(alpha) - 1]
        out = []
        for i, x in enumerate(alpha):
            gamma = alpha[:i] + alpha[i + 1:]
            s = table.get(gamma)
            if s is None:
                s = table[gamma] = set()
            s.add(x)
            out.append((gamma, s))
        return out

    def boundary_sets(self, alpha: tuple) -> list:
        table = self.maps[len(alpha) - 1]
        out = []
        for i in range(len(alpha)):
            gamma = alpha[:i] + alpha[i + 1:]
            try:
                out.append(table[gamma])
            except KeyError:
                raise InvariantViolation(f"no neighbourhood recorded for boundary {gamma} of {alpha}") from None
        return out


def face_frc(index: NeighbourhoodIndex, alpha) -> int:
    """Curvature of an inserted face computed from the neighbourhood index alone."""
    alpha = tuple(alpha.nodes if isinstance(alpha, Simplex) else alpha)
    d = len(alpha) - 1
    if d < 1 or d > index.d_max:
        raise FRCInputError(f"curvature is tracked for dimensions 1..{index.d_max}, got {d}")
    sets = index.boundary_sets(alpha)
    common = set.intersection(*sets)
    return (d + 2) * len(common) + 2 * (d + 1) - sum(len(s) for s in sets)


@dataclass
class DimState:
    count: int
    total: int
    node_sums: list


@dataclass
class CurvatureState:
    """Exact integer accumulators per dimension.

    ``node_sums[x]`` is the sum of F over inserted faces containing x, i.e.
    (d+1) * count * f_d(x); ``total`` is the sum of F over all d-faces.
    """

    n_nodes: int
    d_max: int
    dims: dict = field(default_factory=dict)
    weight: float = -math.inf

    def __post_init__(self):
        if not self.dims:
            self.dims = {d: DimState(0, 0, [0] * self.n_nodes) for d in range(1, self.d_max + 1)}


@dataclass(frozen=True)
class DimSnapshot:
    count: int
    total: int
    node_sums: tuple


@dataclass(frozen=True)
class CurvatureSnapshot:
    """Frozen copy of the accumulators after all faces up to ``cutoff``."""

    cutoff: float
    n_nodes: int
    dims: dict

    def face_density(self, d: int) -> Fraction:
        possible = comb(self.n_nodes, d + 1)
        return Fraction(self.dims[d].count, possible) if possible else Fraction(0)

    def avg_frc(self, d: int) -> Fraction:
        s = self.dims[d]
        return Fraction(s.total, s.count) if s.count else Fraction(0)

    def node_frc(self, d: int) -> list:
        s = self.dims[d]
        if not s.count:
            return [Fraction(0)] * self.n_nodes
        denom = (d + 1) * s.count
        return [Fraction(v, denom) for v in s.node_sums]


def snapshot(state: CurvatureState, cutoff: Optional[float] = None) -> CurvatureSnapshot:
    dims = {d: DimSnapshot(s.count, s.total, tuple(s.node_sums)) for d, s in state.dims.items()}
    return CurvatureSnapshot(state.weight if cutoff is None else cutoff, state.n_nodes, dims)


def insert_face(state: CurvatureState, index: NeighbourhoodIndex, alpha, trace: Optional[list] = None):
    """Insert one d-face and update every affected accumulator.

    Returns F(alpha) at insertion time. When ``trace`` is a list, each
    neighbour update is appended as ``(alpha, neighbour, delta)``.
    """
    nodes = tuple(alpha.nodes if isinstance(alpha, Simplex) else alpha)
    d = len(nodes) - 1
    s = state.dims[d]
    s.count += 1
    bnd = index.add(nodes)
    sets = [b[1] for b in bnd]
    common = set.intersection(*sets)
    f = (d + 2) * len(common) + 2 * (d + 1) - sum(len(p) for p in sets)
    node_sums = s.node_sums
    for x in nodes:
        node_sums[x] += f
    total = s.total + f
    up, down = d + 1, -1
    for i, (gamma, pi) in enumerate(bnd):
        own = nodes[i]
        for x in pi:
            if x == own:
                continue
            dl = up if x in common else down
            total += dl
            for y in gamma:
                node_sums[y] += dl
            node_sums[x] += dl
            if trace is not None:
                trace.append((nodes, tuple(sorted(gamma + (x,))), dl))
    s.total = total
    return f


class FRCEngine:
    """Sequential state machine wrapping the index and the accumulators.

    Faces of dimension 0 only register as present; faces above ``d_max`` are
    ignored. Every face of dimension 1..d_max must arrive after its boundary.
    """

    def __init__(self, n_nodes: int, d_max: int, trace: bool = False):
        if d_max < 1:
            raise FRCInputError(f"d_max must be >= 1, got {d_max}")
        self.n_nodes = n_nodes
        self.d_max = d_max
        self.index = NeighbourhoodIndex(d_max)
        self.state = CurvatureState(n_nodes, d_max)
        self.trace = [] if trace else None
        self._present = {d: set() for d in range(0, d_max + 1)}

    def insert(self, face) -> Optional[int]:
        if isinstance(face, Simplex):
            nodes, weight = face.nodes, face.weight
        else:
            nodes, weight = tuple(face), self.state.weight
        d = len(nodes) - 1
        if d > self.d_max:
            return None
        if weight < self.state.weight:
            raise FRCInputError(f"face {nodes} with weight {weight} arrives after weight {self.state.weight}")
        present = self._present[d]
        if nodes in present:
            raise InvariantViolation(f"face {nodes} inserted twice")
        if d >= 1:
            below = self._present[d - 1]
            for i in range(d + 1):
                if nodes[:i] + nodes[i + 1:] not in below:
                    raise InvariantViolation(f"face {nodes} arrived before its boundary face")
        elif not 0 <= nodes[0] < self.n_nodes:
            raise FRCInputError(f"node {nodes[0]} out of range")
        present.add(nodes)
        self.state.weight = weight
        if d == 0:
            return None
        return insert_face(self.state, self.index, nodes, self.trace)

    def face_frc(self, alpha) -> int:
        return face_frc(self.index, alpha)

    def faces(self, d: int) -> set:
        return self._present.get(d, set())

    def snapshot(self, cutoff: Optional[float] = None) -> CurvatureSnapshot:
        return snapshot(self.state, cutoff)


def empty_snapshot(n_nodes: int, d_max: int, cutoff: float = 0.0) -> CurvatureSnapshot:
    return snapshot(CurvatureState(n_nodes, d_max), cutoff)


def iter_events(filt: Filtration, d_max: Optional[int] = None, engine: Optional[FRCEngine] = None):
    """Yield ``(weight, next_weight, engine)`` after each completed weight group.

    ``next_weight`` is the weight of the following group (``inf`` at the end).
    The engine is live state: snapshot it before advancing the generator.
    """
    if engine is None:
        engine = FRCEngine(filt.n_nodes, d_max or filt.d_max)
    faces = filt.faces
    w = None
    for face in faces:
        fw = face.weight
        if w is not None and fw != w:
            if fw < w:
                raise FRCInputError(f"filtration is not sorted: weight {fw} follows {w}")
            yield w, fw, engine
        engine.insert(face)
        w = fw
    if w is not None:
        yield w, math.inf, engine


def cutoff_grid(precision: int, max_dist: float) -> list:
    """Uniform grid 0, 10^-p, 2*10^-p, ... up to ``max_dist`` inclusive."""
    if precision < 0:
        raise FRCInputError("precision must be >= 0")
    if not math.isfinite(max_dist) or max_dist < 0:
        raise FRCInputError(f"grid end must be finite and non-negative, got {max_dist}")
    scale = 10 ** precision
    k_max = math.floor(round(max_dist * scale, 9))
    return [k / scale for k in range(k_max + 1)]


def iter_samples(filt: Filtration, cutoffs: Sequence[float], d_max: Optional[int] = None,
                 on_event: Optional[Callable] = None) -> Iterator:
    """Yield ``(cutoff, snapshot)`` for ascending ``cutoffs`` as the pass advances.

    Each cutoff gets the state after all faces of weight <= cutoff, so values
    between events are carried forward. Snapshots are only materialised for
    events that cover at least one cutoff. ``on_event(weight, engine)`` is
    called after every completed weight group.
    """
    d_max = d_max or filt.d_max
    cutoffs = list(cutoffs)
    if any(b < a for a, b in zip(cutoffs, cutoffs[1:])):
        raise FRCInputError("cutoffs must be ascending")
    k, n = 0, len(cutoffs)
    current = None
    for w, next_w, engine in iter_events(filt, d_max):
        if on_event is not None:
            on_event(w, engine)
        while k < n and cutoffs[k] < w:
            if current is None:
                current = empty_snapshot(filt.n_nodes, d_max)
            yield cutoffs[k], current
            k += 1
        if k < n and cutoffs[k] < next_w:
            current = engine.snapshot(w)
            while k < n and cutoffs[k] < next_w:
                yield cutoffs[k], current
                k += 1
    while k < n:
        if current is None:
            current = empty_snapshot(filt.n_nodes, d_max)
        yield cutoffs[k], current
        k += 1


@dataclass
class CurvatureSeries:
    """Snapshots on a uniform cutoff grid (step function in the cutoff)."""

    cutoffs: list
    snapshots: list
    n_nodes: int
    d_max: int

    def avg_frc(self, d: int) -> list:
        return [s.avg_frc(d) for s in self.snapshots]

    def face_density(self, d: int) -> list:
        return [s.face_density(d) for s in self.snapshots]

    def node_frc(self, d: int) -> list:
        """``len(cutoffs) x n_nodes`` nested list of local curvatures."""
        return [s.node_frc(d) for s in self.snapshots]

    def rows(self):
        """Long-format rows ``(cutoff, dim, face_density, avg_frc)``."""
        for c, s in zip(self.cutoffs, self.snapshots):
            for d in range(1, self.d_max + 1):
                yield c, d, s.face_density(d), s.avg_frc(d)

    def node_rows(self):
        """Long-format rows ``(cutoff, dim, node_id, local_frc)``."""
        for c, s in zip(self.cutoffs, self.snapshots):
            for d in range(1, self.d_max + 1):
                for x, v in enumerate(s.node_frc(d)):
                    yield c, d, x, v


def run_filtration(filt: Filtration, d_max: Optional[int] = None, precision: int = 2,
                   max_dist: Optional[float] = None) -> CurvatureSeries:
    """One pass over ``filt`` producing snapshots on the ``10^-precision`` grid.

    The grid runs from 0 to ``max_dist``; when that is infinite or omitted the
    largest face weight is used instead.
    """
    d_max = d_max or filt.d_max
    end = filt.max_dist if max_dist is None else max_dist
    if not math.isfinite(end):
        end = max((f.weight for f in filt.faces), default=0.0)
    grid = cutoff_grid(precision, end)
    cutoffs, snaps = [], []
    for c, s in iter_samples(filt, grid, d_max):
        cutoffs.append(c)
        snaps.append(s)
    return CurvatureSeries(cutoffs, snaps, filt.n_nodes, d_max)


def event_snapshots(filt: Filtration, d_max: Optional[int] = None) -> list:
    """Snapshot after every distinct weight of the filtration."""
    return [engine.snapshot(w) for w, _, engine in iter_events(filt, d_max)]
