"""Multi-scale cubical persistence diagrams and their cross-scale stabilization."""
from .field import (RasterImage, ScalarField, ScalePyramid, build_pyramid, downsample,
                    gradient_field, intensity_field, load_image)
from .persistence import PersistenceDiagram, PersistencePoint, betti_at, compute_pd
from .oracle import oracle_pd
from .matching import (DistanceMetric, MatchResult, distance_matrix, match_diagrams,
                       point_distance, solve_assignment)
from .vineyard import (StableDiagram, StablePoint, Vine, VineSegment, stability_score,
                       stabilize, stable_diagram, track_vines)
from .estimators import CubicalPersistence, FiltrationTransformer, VineyardStabilizer

__version__ = "0.1.0"

__all__ = [
    "RasterImage", "ScalarField", "ScalePyramid", "build_pyramid", "downsample",
    "gradient_field", "intensity_field", "load_image",
    "PersistenceDiagram", "PersistencePoint", "betti_at", "compute_pd", "oracle_pd",
    "DistanceMetric", "MatchResult", "distance_matrix", "match_diagrams", "point_distance",
    "solve_assignment",
    "StableDiagram", "StablePoint", "Vine", "VineSegment", "stability_score", "stabilize",
    "stable_diagram", "track_vines",
    "CubicalPersistence", "FiltrationTransformer", "VineyardStabilizer",
]
