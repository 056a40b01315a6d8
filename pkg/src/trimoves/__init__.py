"""trimoves: elementary moves on triangulations, exactly.

Exact rational geometry kernel, the split/merge move calculus on
triangulations of polytopes and polyhedra, synthesis of explicit move
scripts connecting any two triangulations of the same polyhedron, and
extension of valuations from simplices to polyhedra by
inclusion-exclusion with a binary-space-partition cross-check.
"""

from ._backend import BACKEND
from .kernel import (
    BOUNDARY,
    INTERIOR,
    OUTSIDE,
    Chart,
    DimensionMismatch,
    GeometryError,
    Hyperplane,
    Point,
    PointSet,
    affine_rank,
    extreme_points,
    facet_enumeration,
    hyperplane_through,
    orientation,
    point,
    point_in_simplex,
    polytope_intersection,
    side_of,
    vertex_barycenter,
)
from .triangulation import (
    Polyhedron,
    Polytope,
    Simplex,
    Triangulation,
    ValidityReport,
    common_refinement,
    restrict,
    simplex_volume,
    simplex_volume_recursive,
    star_polytope,
    validate,
    validate_cover,
)

__all__ = [
    "BACKEND",
    "BOUNDARY",
    "INTERIOR",
    "OUTSIDE",
    "Chart",
    "DimensionMismatch",
    "GeometryError",
    "Hyperplane",
    "Point",
    "PointSet",
    "Polyhedron",
    "Polytope",
    "Simplex",
    "Triangulation",
    "ValidityReport",
    "affine_rank",
    "common_refinement",
    "extreme_points",
    "facet_enumeration",
    "hyperplane_through",
    "orientation",
    "point",
    "point_in_simplex",
    "polytope_intersection",
    "restrict",
    "side_of",
    "simplex_volume",
    "simplex_volume_recursive",
    "star_polytope",
    "validate",
    "validate_cover",
    "vertex_barycenter",
]
