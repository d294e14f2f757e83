"""
Slow reference curvature by exhaustive neighbour scans.

Nothing here shares code with the incremental engine: neighbours are found
by comparing every pair of faces, cofaces by scanning the next dimension.
Faces are stored as integer bitmasks so the scans stay tolerable for the
complex sizes used in tests.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .errors import FRCInputError


def _mask(nodes) -> int:
    m = 0
    for v in nodes:
        m |= 1 << v
    return m


def _nodes(mask: int) -> tuple:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


class StaticComplex:
    """A finite simplicial complex given by its faces, grouped by dimension."""

    def __init__(self, faces: Iterable, n_nodes: int, check: bool = True):
        self.n_nodes = n_nodes
        by_dim = {}
        for f in faces:
            nodes = tuple(sorted(set(f)))
            if not nodes:
                continue
            by_dim.setdefault(len(nodes) - 1, set()).add(_mask(nodes))
        self._sets = by_dim
        self._lists = {d: sorted(s) for d, s in by_dim.items()}
        self._curv = {}
        if check:
            self._check_closed()

    def _check_closed(self):
        for d, masks in self._sets.items():
            if d == 0:
                continue
            below = self._sets.get(d - 1, set())
            for a in masks:
                for v in _nodes(a):
                    if a & ~(1 << v) not in below:
                        raise FRCInputError(f"complex not closed: boundary of {_nodes(a)} missing")

    @classmethod
    def from_filtration(cls, filt, cutoff: float = math.inf) -> "StaticComplex":
        return cls((f.nodes for f in filt.faces if f.weight <= cutoff), filt.n_nodes)

    @classmethod
    def vietoris_rips(cls, dist, max_dim: int, cutoff: float) -> "StaticComplex":
        """Brute force: every node subset of size <= max_dim + 1 with diameter <= cutoff."""
        m = len(dist)
        faces = []
        for k in range(1, max_dim + 2):
            for sub in combinations(range(m), k):
                if all(dist[u][v] <= cutoff for u, v in combinations(sub, 2)):
                    faces.append(sub)
        return cls(faces, m)

    @classmethod
    def with_completed_cofaces(cls, d_faces: Iterable, d: int, n_nodes: int) -> "StaticComplex":
        """d-faces, all their subfaces, and every (d+2)-node set whose d-faces are all present."""
        d_faces = {tuple(sorted(f)) for f in d_faces}
        faces = set()
        for f in d_faces:
            for k in range(1, d + 2):
                faces.update(combinations(f, k))
        for sub in combinations(range(n_nodes), d + 2):
            if all(s in d_faces for s in combinations(sub, d + 1)):
                faces.add(sub)
        return cls(faces, n_nodes)

    def faces(self, d: int) -> list:
        return [_nodes(a) for a in self._lists.get(d, [])]

    def __contains__(self, nodes) -> bool:
        nodes = tuple(nodes)
        return _mask(nodes) in self._sets.get(len(nodes) - 1, ())


def classify_neighbours(cx: StaticComplex, alpha) -> tuple:
    """Return ``(parallel, transverse, higher)`` face lists for ``alpha``.

    Two d-faces are neighbours if they share a (d-1)-face or lie in a common
    (d+1)-face; parallel means only the first holds, transverse means both.
    ``higher`` are the (d+1)-faces having ``alpha`` as a boundary face.
    """
    alpha = tuple(alpha)
    d = len(alpha) - 1
    a = _mask(alpha)
    if a not in cx._sets.get(d, ()):
        raise FRCInputError(f"{alpha} is not a face of the complex")
    lower = cx._sets.get(d - 1, set())
    upper = cx._sets.get(d + 1, set())
    parallel, transverse = [], []
    for b in cx._lists[d]:
        if b == a:
            continue
        shared = a & b
        cond1 = shared.bit_count() == d and (d == 0 or shared in lower)
        cond2 = (a | b).bit_count() == d + 2 and (a | b) in upper
        if cond1 and not cond2:
            parallel.append(_nodes(b))
        elif cond1 and cond2:
            transverse.append(_nodes(b))
        elif cond2:
            # a common coface forces a shared boundary face in a closed complex
            raise FRCInputError(f"neighbours {alpha} and {_nodes(b)} share a coface but no face")
    higher = [_nodes(s) for s in cx._lists.get(d + 1, []) if s & a == a]
    return parallel, transverse, higher


def neighbours(cx: StaticComplex, alpha) -> list:
    """All neighbours of ``alpha`` by the two-condition definition."""
    alpha = tuple(alpha)
    d = len(alpha) - 1
    a = _mask(alpha)
    upper = cx._sets.get(d + 1, set())
    lower = cx._sets.get(d - 1, set())
    out = []
    for b in cx._lists.get(d, []):
        if b == a:
            continue
        if ((a & b).bit_count() == d and (a & b) in lower) or (a | b) in upper:
            out.append(_nodes(b))
    return out


def face_neighbourhood(cx: StaticComplex, gamma) -> set:
    """Nodes x outside ``gamma`` such that gamma + {x} is a face."""
    gamma = tuple(gamma)
    g = _mask(gamma)
    return {_nodes(b & ~g)[0] for b in cx._lists.get(len(gamma), []) if b & g == g}


def frc_definition(cx: StaticComplex, alpha) -> int:
    """F(alpha) = |cofaces| + (d+1) - |parallel neighbours|."""
    d = len(tuple(alpha)) - 1
    if d < 1:
        raise FRCInputError("curvature is defined for faces of dimension >= 1")
    parallel, _, higher = classify_neighbours(cx, alpha)
    return len(higher) + (d + 1) - len(parallel)


def face_curvatures(cx: StaticComplex, d: int) -> dict:
    """``{face: F(face)}`` for every d-face (memoised on the complex)."""
    cached = cx._curv.get(d)
    if cached is None:
        cached = cx._curv[d] = {f: frc_definition(cx, f) for f in cx.faces(d)}
    return cached


def global_frc(cx: StaticComplex, d: int) -> Fraction:
    """Average curvature over d-faces; 0 when there are none."""
    curv = face_curvatures(cx, d)
    if not curv:
        return Fraction(0)
    return Fraction(sum(curv.values()), len(curv))


def local_frc(cx: StaticComplex, x: int, d: int) -> Fraction:
    """Node share: sum of F over d-faces containing x, over (d+1)|C_d|."""
    if not 0 <= x < cx.n_nodes:
        raise FRCInputError(f"node {x} out of range")
    curv = face_curvatures(cx, d)
    if not curv:
        return Fraction(0)
    return Fraction(sum(v for f, v in curv.items() if x in f), (d + 1) * len(curv))


def local_frcs(cx: StaticComplex, d: int) -> list:
    return [local_frc(cx, x, d) for x in range(cx.n_nodes)]


def face_density(cx: StaticComplex, d: int) -> Fraction:
    possible = math.comb(cx.n_nodes, d + 1)
    return Fraction(len(cx._lists.get(d, [])), possible) if possible else Fraction(0)
