"""Triangulations of polytopes and polyhedra.

A triangulation here is the weak notion: a finite set of n-simplices
covering a polyhedron with pairwise intersections of dimension < n.
Faces need not match, so this is not a simplicial complex.

Cover tests are exact volume accounting: for a family of pairwise
interior-disjoint simplices contained in a region, the union equals the
region iff the rational volumes sum to the region's volume.  Embedded
(dimension d < N) objects are measured in the canonical coordinate
chart of their affine hull, which is consistent across any comparison
of subsets of one hull.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial, isqrt
from typing import Iterable, Optional, Sequence

from . import kernel
from .kernel import (
    GeometryError,
    Point,
    PointSet,
    affine_rank,
    chart_of,
    extreme_points,
    hull_contains,
    point_in_simplex,
    vertex_barycenter,
)
from ._backend import det_int


@dataclass(frozen=True)
class Simplex:
    """Nondegenerate simplex with canonically sorted vertices."""

    vertices: tuple[Point, ...]

    def __post_init__(self):
        verts = tuple(sorted(self.vertices))
        if len(set(verts)) != len(verts):
            raise GeometryError("repeated simplex vertex")
        if affine_rank(verts) != len(verts) - 1:
            raise GeometryError(f"degenerate simplex {verts}")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "_hash", hash(verts))

    @classmethod
    def of(cls, *vertices) -> "Simplex":
        return cls(tuple(kernel.point(*v) for v in vertices))

    def __hash__(self):
        return self._hash  # type: ignore[attr-defined]

    def __eq__(self, other):
        return isinstance(other, Simplex) and self.vertices == other.vertices

    def __lt__(self, other):
        return self.vertices < other.vertices

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def ambient(self) -> int:
        return len(self.vertices[0])

    @property
    def point_set(self) -> PointSet:
        return PointSet.of(self.vertices)

    def classify(self, p: Point) -> str:
        return point_in_simplex(p, self.vertices)

    def contains(self, p: Point) -> bool:
        return self.classify(p) != kernel.OUTSIDE

    def facet_opposite(self, v: Point) -> "Simplex":
        return Simplex(tuple(w for w in self.vertices if w != v))

    def facets(self) -> tuple["Simplex", ...]:
        return tuple(self.facet_opposite(v) for v in self.vertices)

    def with_vertex(self, v: Point) -> "Simplex":
        return Simplex(self.vertices + (v,))


@dataclass(frozen=True)
class Triangulation:
    """Set of equal-dimension simplices (set semantics, no duplicates)."""

    cells: frozenset[Simplex]

    def __post_init__(self):
        cells = frozenset(self.cells)
        if not cells:
            raise GeometryError("empty triangulation")
        dims = {c.dim for c in cells}
        ambients = {c.ambient for c in cells}
        if len(dims) != 1 or len(ambients) != 1:
            raise GeometryError("mixed-dimension triangulation")
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "_hash", hash(cells))

    @classmethod
    def of(cls, cells: Iterable[Simplex]) -> "Triangulation":
        return cls(frozenset(cells))

    def __hash__(self):
        return self._hash  # type: ignore[attr-defined]

    def __eq__(self, other):
        return isinstance(other, Triangulation) and self.cells == other.cells

    def __iter__(self):
        return iter(self.canonical_cells())

    def __len__(self):
        return len(self.cells)

    def __contains__(self, s: Simplex) -> bool:
        return s in self.cells

    @property
    def dim(self) -> int:
        return next(iter(self.cells)).dim

    @property
    def ambient(self) -> int:
        return next(iter(self.cells)).ambient

    def canonical_cells(self) -> tuple[Simplex, ...]:
        return tuple(sorted(self.cells))

    def vertex_set(self) -> PointSet:
        return PointSet.of(v for c in self.cells for v in c.vertices)

    def replace(self, removed: Iterable[Simplex], added: Iterable[Simplex]) -> "Triangulation":
        cells = set(self.cells)
        for s in removed:
            if s not in cells:
                raise GeometryError(f"simplex not present: {s.vertices}")
            cells.remove(s)
        for s in added:
            if s in cells:
                raise GeometryError(f"simplex already present: {s.vertices}")
            cells.add(s)
        return Triangulation(frozenset(cells))


@dataclass(frozen=True)
class Polytope:
    """Convex hull of finitely many points, with derived vertex set."""

    generators: PointSet
    hull: PointSet = field(compare=False)
    dim: int = field(compare=False)

    @classmethod
    def of(cls, points) -> "Polytope":
        ps = points if isinstance(points, PointSet) else PointSet.of(points)
        if not ps:
            raise GeometryError("polytope needs at least one point")
        hull = extreme_points(ps)
        return cls(ps, hull, affine_rank(hull))

    def __hash__(self):
        return hash(self.hull)

    def __eq__(self, other):
        return isinstance(other, Polytope) and self.hull == other.hull

    @property
    def ambient(self) -> int:
        return self.hull.ambient

    def contains(self, p: Point) -> bool:
        return hull_contains(self.hull, p)

    def barycenter(self) -> Point:
        return vertex_barycenter(self.hull)

    def is_simplex(self) -> bool:
        return len(self.hull) == self.dim + 1

    def as_simplex(self) -> Simplex:
        if not self.is_simplex():
            raise GeometryError("polytope is not a simplex")
        return Simplex(self.hull.points)

    def facet_sets(self) -> tuple[PointSet, ...]:
        return kernel.facet_vertex_sets(self.hull)


def simplex_of_points(ps: PointSet) -> Optional[Simplex]:
    """The points as a simplex when they are affinely independent."""
    if len(ps) != affine_rank(ps) + 1:
        return None
    return Simplex(ps.points)


# ---------------------------------------------------------------------------
# volume


def _exact_sqrt(x: Fraction) -> Optional[Fraction]:
    if x < 0:
        return None
    rn = isqrt(x.numerator)
    rd = isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


@lru_cache(maxsize=262144)
def simplex_volume(s: Simplex) -> Fraction:
    """|det| / n! volume of a full-dimensional simplex."""
    if s.dim != s.ambient:
        raise GeometryError("determinant volume needs a full-dimensional simplex")
    return chart_volume(s)


def chart_cols(ps: PointSet) -> tuple[int, ...]:
    """Projection columns of the canonical chart of aff(ps).

    The pivot-column set depends only on the flat (it is the
    lexicographically first coordinate subset on which the flat projects
    bijectively), so measures taken through it are comparable for every
    cell of the same flat.
    """
    return chart_of(ps).cols


@lru_cache(maxsize=262144)
def chart_volume(s: Simplex, cols: Optional[tuple[int, ...]] = None) -> Fraction:
    """Volume of s projected onto chart columns (canonical by default).

    For full-dimensional simplices this is the Euclidean volume; for
    embedded ones it is the exact measure in the canonical chart of the
    simplex's affine hull, consistent for all cells sharing that hull.
    """
    if cols is None:
        if s.dim == s.ambient:
            pts = s.vertices
        else:
            cols = chart_cols(PointSet.of(s.vertices))
            pts = tuple(tuple(v[i] for i in cols) for v in s.vertices)
    else:
        pts = tuple(tuple(v[i] for i in cols) for v in s.vertices)
    d = len(pts) - 1
    rows, den = kernel.scaled_int_rows(pts)
    first = rows[0]
    edges = [[r[j] - first[j] for j in range(d)] for r in rows[1:]]
    det = det_int(edges)
    if det == 0:
        raise GeometryError("degenerate simplex volume")
    return Fraction(abs(det), den**d * factorial(d))


def _flat_distance_squared(apex: Point, flat: Sequence[Point]) -> Fraction:
    """Exact squared Euclidean distance from apex to aff(flat)."""
    p0 = flat[0]
    w = [a - b for a, b in zip(apex, p0)]
    edges = [[a - b for a, b in zip(q, p0)] for q in flat[1:]]
    # Independent subset of edge directions.
    if edges:
        rows, _ = kernel.scaled_int_rows([tuple(e) for e in edges])
        _, pivots, _ = kernel.echelon_int(rows, len(apex))
        edges = [edges[i] for i in pivots]
    ww = sum((c * c for c in w), Fraction(0))
    if not edges:
        return ww
    gram = [[sum((a * b for a, b in zip(ei, ej)), Fraction(0)) for ej in edges] for ei in edges]
    rhs = [sum((a * b for a, b in zip(ei, w)), Fraction(0)) for ei in edges]
    # Solve gram * t = rhs with Fractions (tiny systems).
    m = [row[:] + [r] for row, r in zip(gram, rhs)]
    k = len(m)
    for col in range(k):
        piv = next(i for i in range(col, k) if m[i][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [x / pv for x in m[col]]
        for i in range(k):
            if i != col and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    t = [m[i][k] for i in range(k)]
    proj_sq = sum((ti * ri for ti, ri in zip(t, rhs)), Fraction(0))
    return ww - proj_sq


def simplex_volume_recursive(s: Simplex) -> Fraction:
    """Height times base volume over n, recursively.

    The classical elementary definition of simplex volume.  Heights are
    Euclidean and generally irrational; this path raises GeometryError
    unless every height along the recursion is rational (axis-aligned
    fixtures), and is cross-checked against the determinant formula.
    """
    if s.dim == 0:
        return Fraction(1)
    if s.dim == 1:
        dist2 = sum(((a - b) ** 2 for a, b in zip(*s.vertices)), Fraction(0))
        length = _exact_sqrt(dist2)
        if length is None:
            raise GeometryError("irrational segment length")
        return length
    apex = s.vertices[-1]
    base = s.facet_opposite(apex)
    height = _exact_sqrt(_flat_distance_squared(apex, base.vertices))
    if height is None:
        raise GeometryError("irrational height")
    return height * simplex_volume_recursive(base) / s.dim


@lru_cache(maxsize=65536)
def polytope_volume(p: Polytope) -> Fraction:
    """Chart volume of a polytope: star it at a vertex and sum cells."""
    if p.dim == 0:
        return Fraction(0)
    star = star_polytope(p, p.hull.points[0])
    cols = chart_cols(p.hull) if p.dim < p.ambient else None
    return sum((chart_volume(c, cols) for c in star.cells), Fraction(0))


def triangulation_measure(t: Triangulation) -> dict:
    """Total chart volume per affine-hull class (exact).

    Two triangulations of the same polyhedron have identical measures;
    the keys are the canonical hull equalities of each cell's hull.
    """
    out: dict = {}
    full = t.dim == t.ambient
    for c in t.cells:
        if full:
            key = ()
            vol = simplex_volume(c)
        else:
            ps = PointSet.of(c.vertices)
            key = kernel.hull_equalities(ps)
            vol = chart_volume(c, chart_cols(ps))
        out[key] = out.get(key, Fraction(0)) + vol
    return out


# ---------------------------------------------------------------------------
# validity and covers


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    overlapping_pairs: tuple[tuple[Simplex, Simplex], ...]
    degenerate: tuple[Simplex, ...]


def _bbox(s: Simplex):
    return tuple(
        (min(v[k] for v in s.vertices), max(v[k] for v in s.vertices))
        for k in range(s.ambient)
    )


def validate(t: Triangulation) -> ValidityReport:
    """Report every pair of cells whose intersection has full dimension."""
    n = t.dim
    cells = t.canonical_cells()
    boxes = [_bbox(c) for c in cells]
    bad = []
    for i, j in combinations(range(len(cells)), 2):
        if any(
            bi[1] < bj[0] or bj[1] < bi[0] for bi, bj in zip(boxes[i], boxes[j])
        ):
            continue
        inter = kernel.polytope_intersection(cells[i].point_set, cells[j].point_set)
        if len(inter) and affine_rank(inter) == n:
            bad.append((cells[i], cells[j]))
    return ValidityReport(not bad, tuple(bad), ())


def validate_cover(t: Triangulation, p: Polytope) -> bool:
    """True iff the valid triangulation t covers exactly the polytope p."""
    if t.ambient != p.ambient:
        raise kernel.DimensionMismatch("cover test dimension mismatch")
    if t.dim != p.dim:
        return False
    for c in t.cells:
        if not all(p.contains(v) for v in c.vertices):
            return False
    cols = chart_cols(p.hull) if p.dim < p.ambient else None
    total = sum((chart_volume(c, cols) for c in t.cells), Fraction(0))
    return total == polytope_volume(p)


# ---------------------------------------------------------------------------
# starrings


@lru_cache(maxsize=65536)
def facet_triangulation(f: PointSet) -> tuple[Simplex, ...]:
    """Canonical triangulation of a facet: trivial for simplices, else
    the recursive starring at the vertex-barycenter."""
    d = affine_rank(f)
    if len(f) == d + 1:
        return (Simplex(f.points),)
    return star_polytope(Polytope.of(f), vertex_barycenter(f)).canonical_cells()


@lru_cache(maxsize=65536)
def _star_cached(hull: PointSet, a: Point) -> Triangulation:
    p = Polytope.of(hull)
    cells = []
    for f in p.facet_sets():
        # a lies on the facet iff it lies on the facet's affine hull
        # (supporting hyperplane), since a is a point of p.
        if affine_rank(f.points + (a,)) == affine_rank(f):
            continue
        for s in facet_triangulation(f):
            cells.append(s.with_vertex(a))
    return Triangulation.of(cells)


def star_polytope(p: Polytope, a: Point) -> Triangulation:
    """The canonical starring of p at a point a of p.

    Every facet of p not containing a is triangulated canonically
    (recursively starred at its vertex-barycenter unless it is already a
    simplex) and coned to a.
    """
    if p.dim < 1:
        raise GeometryError("starring needs dimension >= 1")
    if not p.contains(a):
        raise GeometryError(f"star point {a} outside polytope")
    return _star_cached(p.hull, a)


# ---------------------------------------------------------------------------
# refinement


def is_refinement_cell(cell: Simplex, coarse: Simplex) -> bool:
    return all(coarse.contains(v) for v in cell.vertices)


def triangulate_polytope(p: Polytope) -> Triangulation:
    """Canonical triangulation: trivial for a simplex, else the
    barycenter starring."""
    if p.is_simplex():
        return Triangulation.of([p.as_simplex()])
    return star_polytope(p, p.barycenter())


def common_refinement(a: Triangulation, b: Triangulation) -> Triangulation:
    """Intersect all cell pairs; star non-simplex cells at their
    vertex-barycenters; cells that are already simplices are kept."""
    if a.ambient != b.ambient or a.dim != b.dim:
        raise kernel.DimensionMismatch("refinement of incompatible triangulations")
    n = a.dim
    cells = set()
    for s in a.canonical_cells():
        sbox = _bbox(s)
        for t in b.canonical_cells():
            tbox = _bbox(t)
            if any(bi[1] < bj[0] or bj[1] < bi[0] for bi, bj in zip(sbox, tbox)):
                continue
            x = kernel.polytope_intersection(s.point_set, t.point_set)
            if not x or affine_rank(x) != n:
                continue
            cells.update(triangulate_polytope(Polytope.of(x)).cells)
    if not cells:
        raise GeometryError("inputs do not overlap in full dimension")
    g = Triangulation.of(cells)
    ma, mb, mg = (triangulation_measure(x) for x in (a, b, g))
    if not (ma == mb == mg):
        raise GeometryError("inputs do not triangulate the same polyhedron")
    return g


def restrict(g: Triangulation, s: Simplex) -> Triangulation:
    """Sub-triangulation of the cells of g contained in s; must cover s."""
    cells = [c for c in g.cells if is_refinement_cell(c, s)]
    if not cells:
        raise GeometryError("restriction is empty: g does not refine s")
    sub = Triangulation.of(cells)
    cols = chart_cols(PointSet.of(s.vertices)) if s.dim < s.ambient else None
    total = sum((chart_volume(c, cols) for c in cells), Fraction(0))
    if total != chart_volume(s, cols):
        raise GeometryError("restriction does not cover the simplex")
    return sub


# ---------------------------------------------------------------------------
# polyhedra


class Polyhedron:
    """Finite union of equal-dimension polytopes with a cached
    normalization to a triangulation.

    Overlapping pieces are refined by the arrangement of all piece facet
    hyperplanes, so the resulting cells either coincide (deduplicated by
    set semantics) or meet in dimension < n.
    """

    def __init__(self, pieces: Sequence[Polytope], cached: Optional[Triangulation] = None):
        pieces = tuple(pieces)
        if not pieces:
            raise GeometryError("polyhedron needs at least one piece")
        ambients = {p.ambient for p in pieces}
        dims = {p.dim for p in pieces}
        if len(ambients) != 1:
            raise kernel.DimensionMismatch("pieces of mixed ambient dimension")
        if len(dims) != 1:
            raise GeometryError("mixed-dimension polyhedra are not supported")
        self.pieces = pieces
        self._triangulation = cached

    @classmethod
    def from_triangulation(cls, t: Triangulation) -> "Polyhedron":
        return cls(
            tuple(Polytope.of(c.point_set) for c in t.canonical_cells()), cached=t
        )

    @property
    def dim(self) -> int:
        return self.pieces[0].dim

    @property
    def ambient(self) -> int:
        return self.pieces[0].ambient

    def triangulation(self) -> Triangulation:
        if self._triangulation is None:
            self._triangulation = self._normalize()
        return self._triangulation

    def _overlapping(self) -> bool:
        n = self.dim
        for p, q in combinations(self.pieces, 2):
            x = kernel.polytope_intersection(p.hull, q.hull)
            if len(x) and affine_rank(x) == n:
                return True
        return False

    def _normalize(self) -> Triangulation:
        cells = set()
        if len(self.pieces) == 1 or not self._overlapping():
            for p in self.pieces:
                cells.update(triangulate_polytope(p).cells)
            return Triangulation.of(cells)
        planes = set()
        for p in self.pieces:
            for nvec, c in kernel._facet_inequalities(p.hull):
                planes.add(kernel.Hyperplane(nvec, c))
        planes = sorted(planes, key=kernel.Hyperplane.sort_key)
        for p in self.pieces:
            regions = [p.hull]
            for h in planes:
                nxt = []
                for r in regions:
                    sides = {h.side(v) for v in r}
                    if 1 in sides and -1 in sides:
                        for keep in (-1, 1):
                            piece = kernel.halfspace_clip(r, h, keep)
                            if len(piece) and affine_rank(piece) == self.dim:
                                nxt.append(piece)
                    else:
                        nxt.append(r)
                regions = nxt
            for r in regions:
                cells.update(triangulate_polytope(Polytope.of(r)).cells)
        return Triangulation.of(cells)
