"""Incremental Forman-Ricci curvature on Vietoris-Rips filtrations."""

__version__ = "0.1.0"

from .complex import (  # noqa: E402
    Filtration,
    Simplex,
    as_distance_matrix,
    as_point_cloud,
    diameter,
    enumerate_vr_filtration,
    graph_filtration,
    pairwise_distances,
)
from .engine import (  # noqa: E402
    CurvatureSeries,
    CurvatureSnapshot,
    FRCEngine,
    delta,
    event_snapshots,
    face_frc,
    run_filtration,
)
from .errors import CSVFormatError, FRCInputError, InvariantViolation  # noqa: E402
from .geometrize import GeometrizedTable, geometrize  # noqa: E402
from .perturb import fit, is_error_ok, run_perturbation  # noqa: E402
from .synth import RggSpec, gen_rgg_points, load_datasaurus, radius_for_density  # noqa: E402

__all__ = [
    "CSVFormatError", "CurvatureSeries", "CurvatureSnapshot", "FRCEngine", "FRCInputError",
    "Filtration", "GeometrizedTable", "InvariantViolation", "RggSpec", "Simplex",
    "as_distance_matrix", "as_point_cloud", "delta", "diameter", "enumerate_vr_filtration",
    "event_snapshots", "face_frc", "fit", "gen_rgg_points", "geometrize", "graph_filtration",
    "is_error_ok", "load_datasaurus", "pairwise_distances", "radius_for_density",
    "run_filtration", "run_perturbation",
]
