"""
Statistics-preserving random perturbation of a point cloud.

One point at a time is nudged by a normal displacement; a move is kept only
if the per-coordinate means, standard deviations and the Pearson
correlation matrix, rounded to 3 decimals, still equal those of the
original cloud.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .complex import as_point_cloud
from .errors import FRCInputError

RNG_ALGORITHM = "numpy.random.Generator(PCG64)"
DECIMALS = 3


def fit(ds) -> float:
    """Sum of Euclidean norms of all points."""
    return float(np.linalg.norm(np.asarray(ds, dtype=float), axis=1).sum())


def round_half_away(x, decimals: int = DECIMALS) -> np.ndarray:
    scale = 10.0 ** decimals
    x = np.asarray(x, dtype=float)
    return np.copysign(np.floor(np.abs(x) * scale + 0.5), x) / scale


def summary_stats(ds, ddof: int = 1) -> tuple:
    """Per-coordinate means and stds plus the correlation matrix, unrounded."""
    arr = np.asarray(ds, dtype=float)
    means = arr.mean(axis=0)
    stds = arr.std(axis=0, ddof=ddof)
    with np.errstate(invalid="ignore", divide="ignore"):
        corr = np.atleast_2d(np.corrcoef(arr, rowvar=False))
    return means, stds, corr


class _StatsMatch:
    """Rounded-statistics comparison against a fixed reference cloud.

    Means are compared first and the costlier std and correlation terms only
    when needed; the verdict equals comparing all three at once.
    """

    def __init__(self, reference, ddof: int = 1):
        self.ddof = ddof
        means, stds, corr = summary_stats(reference, ddof)
        self.means = round_half_away(means)
        self.stds = round_half_away(stds)
        self.corr = round_half_away(corr)

    def __call__(self, test) -> bool:
        test = np.asarray(test, dtype=float)
        if not np.array_equal(round_half_away(test.mean(axis=0)), self.means):
            return False
        if not np.array_equal(round_half_away(test.std(axis=0, ddof=self.ddof)), self.stds, equal_nan=True):
            return False
        with np.errstate(invalid="ignore", divide="ignore"):
            corr = np.atleast_2d(np.corrcoef(test, rowvar=False))
        return np.array_equal(round_half_away(corr), self.corr, equal_nan=True)


def is_error_ok(test, initial, ddof: int = 1) -> bool:
    """True when rounded means, stds and correlations of both clouds agree."""
    test = np.asarray(test, dtype=float)
    initial = np.asarray(initial, dtype=float)
    if test.shape != initial.shape:
        raise FRCInputError(f"shape mismatch: {test.shape} vs {initial.shape}")
    return _StatsMatch(initial, ddof)(test)


def move_random_point(ds: np.ndarray, scale: float, rng: np.random.Generator) -> np.ndarray:
    test = ds.copy()
    idx = rng.integers(len(ds))
    test[idx] += rng.normal(0.0, scale, size=ds.shape[1])
    return test


def perturb_step(ds, temp: float, scale: float, rng: np.random.Generator) -> np.ndarray:
    """Draw candidates until one moves away from the origin or beats ``temp``.

    Each round draws the point index, then the displacement, then (only if
    the fit did not improve) one uniform number compared against ``temp``.
    """
    if scale <= 0:
        raise FRCInputError("scale must be positive")
    ds = np.asarray(ds, dtype=float)
    base = fit(ds)
    while True:
        test = move_random_point(ds, scale, rng)
        if fit(test) > base or temp > rng.random():
            return test


@dataclass
class PerturbRun:
    dataset: np.ndarray
    iterations: int
    effective_iterations: int
    temp: float
    scale: float
    seed: int
    ddof: int = 1
    rng: str = RNG_ALGORITHM

    def metadata(self) -> dict:
        return {
            "iterations": self.iterations,
            "effective_iterations": self.effective_iterations,
            "temp": self.temp,
            "scale": self.scale,
            "seed": self.seed,
            "ddof": self.ddof,
            "rng": self.rng,
        }


def run_perturbation(ds, iterations: int, temp: float = 1.0, scale: float = 0.5, seed: int = 0,
                     ddof: int = 1, max_effective: Optional[int] = None) -> PerturbRun:
    """Run ``iterations`` perturbation rounds against the original statistics.

    A round is effective when its candidate passes ``is_error_ok`` against
    the *initial* cloud; only then does the current cloud move. With
    ``max_effective`` the run stops early once that many rounds were
    effective (``iterations`` then records the rounds actually performed).
    """
    if iterations < 0:
        raise FRCInputError("iterations must be >= 0")
    initial = as_point_cloud(ds)
    matches = _StatsMatch(initial, ddof)
    rng = np.random.Generator(np.random.PCG64(seed))
    current = initial.copy()
    effective = 0
    done = 0
    for done in range(1, iterations + 1):
        test = perturb_step(current, temp, scale, rng)
        if matches(test):
            current = test
            effective += 1
            if max_effective is not None and effective >= max_effective:
                break
    else:
        done = iterations
    return PerturbRun(current, done, effective, temp, scale, seed, ddof)
