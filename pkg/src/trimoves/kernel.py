"""Exact rational geometric kernel.

Points are tuples of ``fractions.Fraction``; every predicate is decided
by exact integer arithmetic after clearing denominators, so identical
inputs always produce identical canonical outputs.  Enumeration routines
(extreme points, facets, polytope intersection) use exhaustive subset
search: instance sizes in this package are small (vertex counts <= ~16,
ambient dimension <= 3 in practice) and correctness beats speed here.

Lower-dimensional point sets keep their ambient coordinates; rank and
hull computations project internally onto a coordinate chart (a subset
of coordinate axes on which the affine hull projects bijectively).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Iterable, Optional, Sequence

from ._backend import (
    det_int,
    echelon_int,
    minor_vector_int,
    rank_int,
    sign_det_int,
    solve_int,
)

class Point(tuple):
    """Ambient point: a tuple of Fractions with a cached hash.

    Fraction hashing performs a modular inverse per call; points are
    hashed constantly (set-based triangulations), so the first hash is
    cached on the instance.  Equality and ordering are plain tuple
    semantics, interchangeable with raw tuples of Fractions.
    """

    def __hash__(self):
        try:
            return self._h
        except AttributeError:
            h = tuple.__hash__(self)
            self._h = h
            return h


INTERIOR = "interior"
BOUNDARY = "boundary"
OUTSIDE = "outside"


class GeometryError(ValueError):
    """A geometric precondition was violated."""


class DimensionMismatch(GeometryError):
    """Operands do not share an ambient dimension."""


def point(*coords) -> Point:
    """Build a Point from ints / Fractions / 'p/q' strings."""
    return Point(Fraction(c) for c in coords)


def intern_point(p) -> Point:
    """Wrap a coordinate tuple as a hash-caching Point."""
    return p if type(p) is Point else Point(p)


def _check_same_dim(points: Sequence[Point]) -> int:
    if not points:
        raise GeometryError("empty point list")
    n = len(points[0])
    for p in points:
        if len(p) != n:
            raise DimensionMismatch("points of mixed ambient dimension")
    return n


def scaled_int_rows(points: Sequence[Point]) -> tuple[list[list[int]], int]:
    """Clear denominators by a common factor; returns (rows, factor)."""
    den = 1
    for p in points:
        for c in p:
            d = c.denominator
            den = den * d // gcd(den, d)
    return [[c.numerator * (den // c.denominator) for c in p] for p in points], den


def _edge_rows(points: Sequence[Point]) -> list[list[int]]:
    rows, _ = scaled_int_rows(points)
    first = rows[0]
    return [[r[j] - first[j] for j in range(len(first))] for r in rows[1:]]


def orientation(points: Sequence[Point]) -> int:
    """Sign of the edge-vector determinant of N+1 points in R^N."""
    n = _check_same_dim(points)
    if len(points) != n + 1:
        raise DimensionMismatch(
            f"orientation needs {n + 1} points in dimension {n}, got {len(points)}"
        )
    return sign_det_int(_edge_rows(points))


def affine_rank(points: Iterable[Point]) -> int:
    """Dimension of the affine hull (0 for a single point)."""
    pts = list(points)
    n = _check_same_dim(pts)
    if len(pts) == 1:
        return 0
    return rank_int(_edge_rows(pts), n)


# ---------------------------------------------------------------------------
# canonical hyperplanes


@dataclass(frozen=True)
class Hyperplane:
    """Canonical hyperplane {x : <normal, x> = offset}.

    Coefficients (normal entries and offset together) are coprime
    integers with the first nonzero normal entry positive, so equal
    hyperplanes compare equal structurally.
    """

    normal: tuple[int, ...]
    offset: int

    def __post_init__(self):
        coeffs = list(self.normal) + [self.offset]
        if all(c == 0 for c in self.normal):
            raise GeometryError("hyperplane normal must be nonzero")
        if not all(isinstance(c, int) for c in coeffs):
            fracs = [Fraction(c) for c in coeffs]
            den = 1
            for c in fracs:
                d = c.denominator
                den = den * d // gcd(den, d)
            coeffs = [int(c * den) for c in fracs]
        g = 0
        for c in coeffs:
            g = gcd(g, c)
        coeffs = [c // g for c in coeffs]
        for c in coeffs[:-1]:
            if c != 0:
                if c < 0:
                    coeffs = [-x for x in coeffs]
                break
        object.__setattr__(self, "normal", tuple(coeffs[:-1]))
        object.__setattr__(self, "offset", coeffs[-1])

    def evaluate(self, p: Point) -> Fraction:
        if len(p) != len(self.normal):
            raise DimensionMismatch("hyperplane/point dimension mismatch")
        return sum((n * c for n, c in zip(self.normal, p)), Fraction(0)) - self.offset

    def side(self, p: Point) -> int:
        if len(p) != len(self.normal):
            raise DimensionMismatch("hyperplane/point dimension mismatch")
        den = 1
        for c in p:
            d = c.denominator
            den = den * d // gcd(den, d)
        s = -self.offset * den
        for n, c in zip(self.normal, p):
            s += n * c.numerator * (den // c.denominator)
        return (s > 0) - (s < 0)

    def sort_key(self):
        return (self.normal, self.offset)


def side_of(h: Hyperplane, p: Point) -> int:
    """Sign of <normal, p> - offset."""
    return h.side(p)


def hyperplane_through(points: Sequence[Point]) -> Hyperplane:
    """Canonical hyperplane containing points that span dimension N-1."""
    n = _check_same_dim(points)
    if len(points) < n:
        raise GeometryError("too few points to span a hyperplane")
    edges = _edge_rows(points)
    rank, pivot_rows, _ = echelon_int(edges, n)
    if rank != n - 1:
        raise GeometryError(
            f"points span dimension {rank}, need {n - 1} for a hyperplane"
        )
    normal = minor_vector_int([edges[i] for i in pivot_rows])
    offset = sum((Fraction(v) * c for v, c in zip(normal, points[0])), Fraction(0))
    return Hyperplane(tuple(Fraction(v) for v in normal), offset)


def segment_crossing(p: Point, q: Point, h: Hyperplane) -> Optional[tuple[Fraction, Point]]:
    """Strict interior crossing of segment [p, q] with h, as (t, point)."""
    ep = h.evaluate(p)
    eq = h.evaluate(q)
    if (ep > 0 and eq < 0) or (ep < 0 and eq > 0):
        t = ep / (ep - eq)
        x = tuple(a + t * (b - a) for a, b in zip(p, q))
        return t, x
    return None


def point_between(w: Point, u: Point, v: Point) -> bool:
    """True iff w lies strictly inside the open segment (u, v)."""
    if not (len(w) == len(u) == len(v)):
        raise DimensionMismatch("mixed dimensions in betweenness test")
    if u == v:
        return False
    t = None
    for wu, uu, vv in zip(w, u, v):
        dv = vv - uu
        if dv == 0:
            if wu != uu:
                return False
        else:
            ti = (wu - uu) / dv
            if t is None:
                t = ti
            elif ti != t:
                return False
    return t is not None and 0 < t < 1


# ---------------------------------------------------------------------------
# point sets and charts


@dataclass(frozen=True)
class PointSet:
    """Finite set of distinct points, canonically (lexicographically) sorted.

    May be empty (the empty intersection); operations that need geometry
    raise on empty input.
    """

    points: tuple[Point, ...]

    def __post_init__(self):
        pts = tuple(intern_point(p) for p in sorted(set(self.points)))
        if pts:
            _check_same_dim(pts)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "_hash", hash(pts))

    @classmethod
    def of(cls, points: Iterable[Point]) -> "PointSet":
        return cls(tuple(points))

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __bool__(self):
        return bool(self.points)

    def __contains__(self, p: Point) -> bool:
        return p in self.points

    def __hash__(self):
        return self._hash  # type: ignore[attr-defined]

    def __eq__(self, other):
        return isinstance(other, PointSet) and self.points == other.points

    @property
    def ambient(self) -> int:
        if not self.points:
            raise GeometryError("empty point set has no ambient dimension")
        return len(self.points[0])


EMPTY_SET = PointSet(())


def vertex_barycenter(ps: PointSet | Sequence[Point]) -> Point:
    pts = ps.points if isinstance(ps, PointSet) else tuple(ps)
    if not pts:
        raise GeometryError("barycenter of an empty point set")
    m = len(pts)
    return tuple(sum(col, Fraction(0)) / m for col in zip(*pts))


@dataclass(frozen=True)
class Chart:
    """Affine-bijective projection of a flat onto coordinate axes.

    ``cols`` are coordinate indices such that projecting the affine hull
    of the defining points onto them is injective; ``origin`` and
    ``basis`` reconstruct ambient points from chart coordinates.
    """

    ambient: int
    cols: tuple[int, ...]
    origin: Point
    basis: tuple[Point, ...]

    @property
    def dim(self) -> int:
        return len(self.cols)

    def to_chart(self, p: Point) -> Point:
        return tuple(p[i] for i in self.cols)

    def from_chart(self, q: Point) -> Point:
        d = self.dim
        if d == 0:
            return self.origin
        rows = []
        rhs = []
        for i, col in enumerate(self.cols):
            coeffs = [self.basis[j][col] for j in range(d)] + [q[i] - self.origin[col]]
            den = 1
            for c in coeffs:
                dd = c.denominator
                den = den * dd // gcd(den, dd)
            ints = [c.numerator * (den // c.denominator) for c in coeffs]
            rows.append(ints[:-1])
            rhs.append(ints[-1])
        sol = solve_int(rows, rhs)
        if sol is None:
            raise GeometryError("degenerate chart basis")
        nums, dd = sol
        ts = [Fraction(nm, dd) for nm in nums]
        return tuple(
            self.origin[k] + sum((t * e[k] for t, e in zip(ts, self.basis)), Fraction(0))
            for k in range(self.ambient)
        )


@lru_cache(maxsize=65536)
def chart_of(ps: PointSet) -> Chart:
    """Canonical chart for the affine hull of a point set."""
    pts = ps.points
    if not pts:
        raise GeometryError("chart of an empty point set")
    n = ps.ambient
    if len(pts) == 1:
        return Chart(n, (), pts[0], ())
    edges = _edge_rows(pts)
    _, pivot_rows, pivot_cols = echelon_int(edges, n)
    basis = tuple(
        tuple(pts[i + 1][k] - pts[0][k] for k in range(n)) for i in pivot_rows
    )
    return Chart(n, tuple(pivot_cols), pts[0], basis)


@lru_cache(maxsize=65536)
def hull_equalities(ps: PointSet) -> tuple[Hyperplane, ...]:
    """Canonical hyperplanes cutting out the affine hull (N - dim many)."""
    pts = ps.points
    if not pts:
        raise GeometryError("affine hull of an empty point set")
    n = ps.ambient
    edges = _edge_rows(pts) if len(pts) > 1 else []
    # Nullspace of the edge matrix by rational elimination (small, cached).
    rows = [[Fraction(v) for v in r] for r in edges]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][col]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    out = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -rows[i][f]
        offset = sum((a * b for a, b in zip(v, pts[0])), Fraction(0))
        out.append(Hyperplane(tuple(v), offset))
    return tuple(sorted(out, key=Hyperplane.sort_key))


# ---------------------------------------------------------------------------
# hull enumeration (exhaustive subset search)


@dataclass(frozen=True)
class Facet:
    """Supporting hyperplane of a full-dimensional hull, with its vertices.

    ``outward`` is the sign of ``plane.side(x)`` for points beyond the
    facet; hull points x satisfy ``outward * plane.side(x) <= 0``.
    """

    plane: Hyperplane
    vertices: "PointSet"
    outward: int


@lru_cache(maxsize=65536)
def _chart_hull(ps: PointSet):
    """Extreme points and chart facets of conv(ps) inside its affine hull.

    Returns ``(chart, extremes, facets)`` where each facet is a triple
    ``(normal, offset, on_indices)`` in *original* chart coordinates with
    the convention that hull points x satisfy <normal, x> <= offset.
    """
    if not ps.points:
        raise GeometryError("hull of an empty point set")
    chart = chart_of(ps)
    d = chart.dim
    pts = ps.points
    if d == 0:
        return chart, PointSet.of(pts), ()
    cpts = [chart.to_chart(p) for p in pts]
    rows, den = scaled_int_rows(cpts)
    m = len(rows)
    seen = set()
    facets = []
    for subset in combinations(range(m), d):
        base = rows[subset[0]]
        edges = [[rows[i][j] - base[j] for j in range(d)] for i in subset[1:]]
        normal = minor_vector_int(edges)
        if all(v == 0 for v in normal):
            continue
        offset = sum(a * b for a, b in zip(normal, base))
        pos = neg = False
        sides = []
        for r in rows:
            s = sum(a * b for a, b in zip(normal, r)) - offset
            sides.append(s)
            pos = pos or s > 0
            neg = neg or s < 0
        if pos and neg:
            continue
        if pos:
            normal = [-v for v in normal]
            offset = -offset
            sides = [-s for s in sides]
        # Rescale to original (unscaled) chart coordinates: the rows are
        # den * x, so <n, den x> <= c becomes <den n, x> <= c.
        onormal = [v * den for v in normal]
        g = 0
        for v in onormal:
            g = gcd(g, v)
        g = gcd(g, offset)
        key = (tuple(v // g for v in onormal), offset // g)
        if key in seen:
            continue
        seen.add(key)
        on = tuple(i for i in range(m) if sides[i] == 0)
        facets.append((key[0], key[1], on))
    facets.sort()
    # A point is extreme iff the normals of its facets span the chart.
    extremes = []
    for i, p in enumerate(pts):
        normals = [f[0] for f in facets if i in f[2]]
        if normals and rank_int(normals, d) == d:
            extremes.append(p)
    return chart, PointSet.of(extremes), tuple(facets)


def extreme_points(ps: PointSet) -> PointSet:
    """The points of ps not in the convex hull of the others."""
    if len(ps) <= 1:
        return ps
    return _chart_hull(ps)[1]


@lru_cache(maxsize=65536)
def oriented_facets(ps: PointSet) -> tuple[Facet, ...]:
    """Facets of a full-dimensional hull with orientation information."""
    n = ps.ambient
    chart, extremes, cfacets = _chart_hull(ps)
    if chart.dim != n:
        raise GeometryError("facet enumeration requires a full-dimensional input")
    out = []
    ext = set(extremes.points)
    for normal, offset, on in cfacets:
        plane = Hyperplane(tuple(normal), offset)
        onset = set(on)
        verts = PointSet.of(
            p for i, p in enumerate(ps.points) if i in onset and p in ext
        )
        probe = next((p for p in ps.points if plane.side(p) != 0), None)
        if probe is None:
            raise GeometryError("degenerate facet orientation")
        outward = -plane.side(probe)
        out.append(Facet(plane, verts, outward))
    return tuple(sorted(out, key=lambda f: f.plane.sort_key()))


def facet_enumeration(ps: PointSet) -> list[tuple[Hyperplane, PointSet]]:
    """Every facet of conv(ps): supporting hyperplane plus its vertices."""
    return [(f.plane, f.vertices) for f in oriented_facets(ps)]


def facet_vertex_sets(ps: PointSet) -> tuple[PointSet, ...]:
    """Vertex sets of the (d-1)-faces of conv(ps), any dimension d >= 1."""
    chart, extremes, cfacets = _chart_hull(ps)
    if chart.dim == 0:
        raise GeometryError("a point has no facets")
    ext = set(extremes.points)
    out = set()
    for _, _, on in cfacets:
        onset = set(on)
        out.add(
            PointSet.of(p for i, p in enumerate(ps.points) if i in onset and p in ext)
        )
    return tuple(sorted(out, key=lambda s: s.points))


@lru_cache(maxsize=262144)
def hull_contains(ps: PointSet, p: Point) -> bool:
    """Exact membership of p in conv(ps)."""
    if not ps.points:
        return False
    if len(p) != ps.ambient:
        raise DimensionMismatch("point/hull dimension mismatch")
    for eq in hull_equalities(ps):
        if eq.side(p) != 0:
            return False
    chart, _, cfacets = _chart_hull(ps)
    if chart.dim == 0:
        return p == ps.points[0]
    q = chart.to_chart(p)
    den = 1
    for c in q:
        d = c.denominator
        den = den * d // gcd(den, d)
    qi = [c.numerator * (den // c.denominator) for c in q]
    for normal, offset, _ in cfacets:
        if sum(a * b for a, b in zip(normal, qi)) > offset * den:
            return False
    return True


def _facet_inequalities(ps: PointSet) -> list[tuple[tuple[int, ...], int]]:
    """Ambient inequalities (n, c), <n, x> <= c, describing conv within its hull."""
    n = ps.ambient
    chart, _, cfacets = _chart_hull(ps)
    d = chart.dim
    if d == 0:
        return []
    if d == n:
        return [(tuple(normal), offset) for normal, offset, _ in cfacets]
    # Lift each chart facet to an ambient halfspace whose hyperplane
    # contains the facet and the orthogonal complement of the hull.
    eq_rows = [list(h.normal) for h in hull_equalities(ps)]
    out = []
    for _, _, on in cfacets:
        fpts = [ps.points[i] for i in on]
        frows, _ = scaled_int_rows(fpts)
        if len(frows) > 1:
            base = frows[0]
            edges = [[r[j] - base[j] for j in range(n)] for r in frows[1:]]
            _, pivot_rows, _ = echelon_int(edges, n)
            edges = [edges[i] for i in pivot_rows]
        else:
            edges = []
        normal = minor_vector_int(edges + eq_rows)
        if all(v == 0 for v in normal):
            raise GeometryError("degenerate facet lift")
        offset = sum((Fraction(v) * c for v, c in zip(normal, fpts[0])), Fraction(0))
        nvec = tuple(v * offset.denominator for v in normal)
        cval = offset.numerator
        for p in ps.points:
            s = sum((Fraction(a) * b for a, b in zip(nvec, p)), Fraction(0)) - cval
            if s > 0:
                nvec = tuple(-v for v in nvec)
                cval = -cval
                break
            if s < 0:
                break
        out.append((nvec, cval))
    return out


def polytope_intersection(a: PointSet, b: PointSet) -> PointSet:
    """V-representation of conv(a) ∩ conv(b); empty PointSet when disjoint.

    Brute force: the H-representations (facet inequalities, plus affine
    hull equalities for lower-dimensional operands) are joined and every
    N-subset of constraints is solved for a candidate vertex, which is
    kept when it satisfies the full system.
    """
    if not a.points or not b.points:
        return EMPTY_SET
    if a.ambient != b.ambient:
        raise DimensionMismatch("intersection of different ambient dimensions")
    n = a.ambient
    for k in range(n):
        if max(p[k] for p in a.points) < min(p[k] for p in b.points):
            return EMPTY_SET
        if max(p[k] for p in b.points) < min(p[k] for p in a.points):
            return EMPTY_SET
    eq_planes: list[Hyperplane] = []
    for x in (a, b):
        eq_planes.extend(hull_equalities(x))
    ineqs = _facet_inequalities(a) + _facet_inequalities(b)
    eq_rows = [list(h.normal) for h in eq_planes]
    if eq_rows:
        _, pivot_rows, _ = echelon_int(eq_rows, n)
        eq_sel = [eq_planes[i] for i in pivot_rows]
    else:
        eq_sel = []
    r = len(eq_sel)
    rows_fixed = [list(h.normal) for h in eq_sel]
    rhs_fixed = [h.offset for h in eq_sel]
    candidates = set()
    if r >= n:
        sol = solve_int(rows_fixed[:n], rhs_fixed[:n])
        if sol is not None:
            nums, dd = sol
            candidates.add(tuple(Fraction(nm, dd) for nm in nums))
    else:
        for subset in combinations(range(len(ineqs)), n - r):
            rows = rows_fixed + [list(ineqs[i][0]) for i in subset]
            rhs = rhs_fixed + [ineqs[i][1] for i in subset]
            sol = solve_int(rows, rhs)
            if sol is None:
                continue
            nums, dd = sol
            candidates.add(tuple(Fraction(nm, dd) for nm in nums))
    feasible = []
    for p in candidates:
        if all(h.side(p) == 0 for h in eq_planes) and all(
            sum((nv * c for nv, c in zip(nvec, p)), Fraction(0)) <= cc
            for nvec, cc in ineqs
        ):
            feasible.append(p)
    if not feasible:
        return EMPTY_SET
    return extreme_points(PointSet.of(feasible))


def point_in_simplex(p: Point, vertices: Sequence[Point]) -> str:
    """Classify p against a simplex: interior / boundary / outside.

    For simplices of dimension d < N 'interior' means the relative
    interior within the affine hull.
    """
    verts = tuple(vertices)
    n = _check_same_dim(list(verts) + [p])
    d = len(verts) - 1
    if d == 0:
        return INTERIOR if p == verts[0] else OUTSIDE
    if d < n:
        ps = PointSet.of(verts)
        for eq in hull_equalities(ps):
            if eq.side(p) != 0:
                return OUTSIDE
        chart = chart_of(ps)
        return point_in_simplex(chart.to_chart(p), [chart.to_chart(v) for v in verts])
    s = orientation(verts)
    if s == 0:
        raise GeometryError("degenerate simplex")
    has_zero = False
    lst = list(verts)
    for i in range(d + 1):
        saved = lst[i]
        lst[i] = p
        si = orientation(lst)
        lst[i] = saved
        if si == 0:
            has_zero = True
        elif si != s:
            return OUTSIDE
    return BOUNDARY if has_zero else INTERIOR


def halfspace_clip(ps: PointSet, h: Hyperplane, keep: int) -> PointSet:
    """Vertices of conv(ps) ∩ {x : keep * side(x) >= 0}; may be empty.

    Intended for full-dimensional hulls; candidate crossings between all
    vertex pairs are filtered through extreme_points.
    """
    if keep not in (-1, 1):
        raise GeometryError("keep must be +1 or -1")
    pts = ps.points
    sides = {p: h.side(p) * keep for p in pts}
    cands = [p for p in pts if sides[p] >= 0]
    for u, v in combinations(pts, 2):
        if sides[u] * sides[v] < 0:
            crossing = segment_crossing(u, v, h)
            if crossing is not None:
                cands.append(crossing[1])
    if not cands:
        return EMPTY_SET
    return extreme_points(PointSet.of(cands))


def hyperplane_section(ps: PointSet, h: Hyperplane) -> PointSet:
    """Vertices of conv(ps) ∩ h; may be empty."""
    pts = ps.points
    cands = [p for p in pts if h.side(p) == 0]
    for u, v in combinations(pts, 2):
        crossing = segment_crossing(u, v, h)
        if crossing is not None:
            cands.append(crossing[1])
    if not cands:
        return EMPTY_SET
    return extreme_points(PointSet.of(cands))
