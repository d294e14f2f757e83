"""Synthetic point clouds and the bundled Datasaurus shapes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import FRCInputError

DATASAURUS_NAMES = (
    "away", "bullseye", "circle", "dino", "dots", "h_lines", "high_lines",
    "slant_down", "slant_up", "star", "v_lines", "wide_lines", "x_shape",
)


@dataclass(frozen=True)
class RggSpec:
    n: int
    dim: int
    target_density: float = 0.25
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise FRCInputError("random geometric graphs need n >= 2")
        if self.dim < 1:
            raise FRCInputError("box dimension must be >= 1")
        if not 0 < self.target_density < 1:
            raise FRCInputError("target density must lie in (0, 1)")


def gen_rgg_points(spec: RggSpec) -> np.ndarray:
    """``n`` points uniform in the unit hypercube ``[0, 1)^dim``."""
    rng = np.random.default_rng(spec.seed)
    return rng.random((spec.n, spec.dim))


def radius_for_density(dist, rho: float) -> float:
    """Smallest pairwise distance whose threshold graph has edge density >= rho."""
    if not 0 < rho < 1:
        raise FRCInputError("rho must lie in (0, 1)")
    D = np.asarray(dist, dtype=float)
    m = len(D)
    if m < 2:
        raise FRCInputError("need at least two points")
    pairs = np.sort(D[np.triu_indices(m, 1)])
    # round first: 0.1 * 4950 is 495.00000000000006 in binary floating point
    k = max(1, math.ceil(round(rho * len(pairs), 9)))
    return float(pairs[k - 1])


def load_datasaurus(name: str = "dino") -> np.ndarray:
    """One Datasaurus Dozen shape as a ``(142, 2)`` array of ``x, y``."""
    if name not in DATASAURUS_NAMES:
        raise FRCInputError(f"unknown Datasaurus shape {name!r}; choose from {', '.join(DATASAURUS_NAMES)}")
    path = resources.files("formanvr") / "data" / "datasaurus" / f"{name}.csv"
    with path.open() as fh:
        return np.loadtxt(fh, delimiter=",", skiprows=1)


def load_two_groups():
    """Bundled 50-row fixture: four numeric features plus a ``group`` label."""
    path = resources.files("formanvr") / "data" / "two_groups.csv"
    with path.open() as fh:
        rows = [line.strip().split(",") for line in fh if line.strip()]
    header, body = rows[0], rows[1:]
    labels = [r[-1] for r in body]
    values = np.array([[float(v) for v in r[:-1]] for r in body])
    return values, labels, header
