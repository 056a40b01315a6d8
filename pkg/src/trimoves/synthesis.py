"""Move-script synthesis: constructive triangulation equivalence.

Every function here turns an equivalence argument into an explicit,
replayable script of elementary moves and verifies it internally: moves
are applied to a running state as they are emitted (so every step is
legality-checked in context) and the final state is asserted against
the declared endpoint before a script is returned.

The construction is dimension-indexed.  Facet-level subproblems are
(n-1)-dimensional objects embedded in ambient space; they are
transferred through an exact affine coordinate chart, solved
full-dimensionally, and the resulting scripts are mapped back and
lifted as cone moves over an apex (splits and merges commute with both
operations).  The public entry points accept full-dimensional inputs
only; embedded objects occur internally.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from . import kernel
from .kernel import (
    Chart,
    GeometryError,
    Hyperplane,
    Point,
    PointSet,
    chart_of,
    hull_contains,
    hyperplane_section,
    hyperplane_through,
    oriented_facets,
    segment_crossing,
    vertex_barycenter,
)
from .moves import (
    Merge,
    Move,
    MoveScript,
    Split,
    apply_move,
    invert_move,
    mergeable,
)
from .triangulation import (
    Polytope,
    Simplex,
    Triangulation,
    chart_cols,
    chart_volume,
    common_refinement,
    facet_triangulation,
    restrict,
    star_polytope,
    validate_cover,
)


class SynthesisError(GeometryError):
    """A synthesis-internal invariant failed (always a bug or bad input)."""


class ScriptBuilder:
    """Accumulates moves, applying each to a running state immediately."""

    def __init__(self, state: Triangulation):
        self.state = state
        self.moves: list[Move] = []

    def emit(self, m: Move) -> None:
        self.state = apply_move(self.state, m)
        self.moves.append(m)

    def extend(self, moves: Iterable[Move]) -> None:
        for m in moves:
            self.emit(m)


def _inverted(moves: Sequence[Move]) -> tuple[Move, ...]:
    return tuple(invert_move(m) for m in reversed(moves))


# ---------------------------------------------------------------------------
# chart transfer and pyramid lifting


def _map_simplex(s: Simplex, f) -> Simplex:
    return Simplex(tuple(f(v) for v in s.vertices))


def _map_move(m: Move, f) -> Move:
    if isinstance(m, Split):
        return Split(_map_simplex(m.target, f), f(m.u), f(m.v), f(m.w))
    return Merge(_map_simplex(m.first, f), _map_simplex(m.second, f))


def _map_moves(moves: Sequence[Move], f) -> tuple[Move, ...]:
    return tuple(_map_move(m, f) for m in moves)


def _chart_triangulation(t: Triangulation, chart: Chart) -> Triangulation:
    return Triangulation.of(_map_simplex(c, chart.to_chart) for c in t.cells)


@dataclass(frozen=True)
class PyramidContext:
    """A pyramid [Q, v]: base polytope Q and an apex off its affine hull."""

    base: Polytope
    apex: Point

    def __post_init__(self):
        if kernel.affine_rank(self.base.hull.points + (self.apex,)) != self.base.dim + 1:
            raise GeometryError("pyramid apex lies in the affine hull of the base")


def lift_move(m: Move, apex: Point) -> Move:
    """Cone a move over an apex: [S, v] splits/merges exactly as S does."""
    if isinstance(m, Split):
        return Split(m.target.with_vertex(apex), m.u, m.v, m.w)
    return Merge(m.first.with_vertex(apex), m.second.with_vertex(apex))


def _lift_moves(moves: Sequence[Move], apex: Point) -> tuple[Move, ...]:
    return tuple(lift_move(m, apex) for m in moves)


def pyramid_lift(script: MoveScript, ctx: PyramidContext) -> MoveScript:
    """Lift a base script to the pyramid: each move gains the apex vertex.

    Replaying the lifted script on [alpha Q, v] yields [beta Q, v] when
    the input replays alpha Q into beta Q.
    """
    return MoveScript(_lift_moves(script.moves, ctx.apex))


def cone_triangulation(t: Triangulation, apex: Point) -> Triangulation:
    return Triangulation.of(c.with_vertex(apex) for c in t.cells)


# ---------------------------------------------------------------------------
# dimension-1 base cases


def _merge_runs(builder: ScriptBuilder, cells: Sequence[Simplex]) -> list[Simplex]:
    """Merge touching collinear segment cells into maximal runs."""
    grouped: dict = {}
    for c in cells:
        key = kernel.hull_equalities(PointSet.of(c.vertices))
        grouped.setdefault(key, []).append(c)
    coarse = []
    for key in sorted(grouped, key=lambda k: tuple(h.sort_key() for h in k)):
        col = chart_cols(PointSet.of(grouped[key][0].vertices))[0]
        run = sorted(grouped[key], key=lambda c: min(v[col] for v in c.vertices))
        current = run[0]
        for nxt in run[1:]:
            if max(current.vertices, key=lambda v: v[col]) == min(
                nxt.vertices, key=lambda v: v[col]
            ):
                m = Merge(current, nxt)
                builder.emit(m)
                current = m.results()[0]
            else:
                coarse.append(current)
                current = nxt
        coarse.append(current)
    return coarse


def _connect_dim1(a: Triangulation, b: Triangulation) -> tuple[Move, ...]:
    """Connect two segment triangulations of the same 1-polyhedron."""
    if a == b:
        return ()
    ba = ScriptBuilder(a)
    coarse_a = _merge_runs(ba, a.canonical_cells())
    bb = ScriptBuilder(b)
    coarse_b = _merge_runs(bb, b.canonical_cells())
    if set(coarse_a) != set(coarse_b):
        raise SynthesisError("segment triangulations do not cover the same set")
    return tuple(ba.moves) + _inverted(bb.moves)


# ---------------------------------------------------------------------------
# polyhedron-level connection (dimension recursion entry)


def _cuts_interior(h: Hyperplane, points: Iterable[Point]) -> bool:
    pos = neg = False
    for p in points:
        s = h.side(p)
        pos = pos or s > 0
        neg = neg or s < 0
        if pos and neg:
            return True
    return False


@lru_cache(maxsize=16384)
def _connect_polyhedron(a: Triangulation, b: Triangulation) -> tuple[Move, ...]:
    """Moves from a to b, two triangulations of one (possibly embedded)
    polyhedron: go through their common refinement, collapsing it inside
    every cell of each side.

    The per-cell collapse exploits the refinement's piece structure: the
    refinement cells inside one side-cell S group into the intersection
    polytopes S ∩ T, each already in its canonical resting state, so the
    stage machinery only needs the hulls of the piece facets, not the
    interior cone walls of the starred pieces.
    """
    if a == b:
        return ()
    if a.dim == 1:
        return _connect_dim1(a, b)
    n = a.dim
    from .triangulation import triangulation_measure, triangulate_polytope

    pieces_a: dict[Simplex, list[Polytope]] = {s: [] for s in a.cells}
    pieces_b: dict[Simplex, list[Polytope]] = {t: [] for t in b.cells}
    gcells: set[Simplex] = set()
    for s in a.canonical_cells():
        for t in b.canonical_cells():
            x = kernel.polytope_intersection(s.point_set, t.point_set)
            if not x or kernel.affine_rank(x) != n:
                continue
            px = Polytope.of(x)
            pieces_a[s].append(px)
            pieces_b[t].append(px)
            gcells.update(triangulate_polytope(px).cells)
    if not gcells:
        raise GeometryError("inputs do not overlap in full dimension")
    g = Triangulation.of(gcells)
    ma, mb, mg = (triangulation_measure(x) for x in (a, b, g))
    if not (ma == mb == mg):
        raise GeometryError("inputs do not triangulate the same polyhedron")
    out: list[Move] = []
    for s in a.canonical_cells():
        out.extend(_side_expand(s, pieces_a[s]))
    back: list[Move] = []
    for t in b.canonical_cells():
        back.extend(_side_expand(t, pieces_b[t]))
    return tuple(out) + _inverted(back)


def _side_expand(s: Simplex, pieces: list[Polytope]) -> list[Move]:
    """Moves from {s} to the refinement cells inside s."""
    from .triangulation import triangulate_polytope

    sub = Triangulation.of(
        c for px in pieces for c in triangulate_polytope(px).cells
    )
    if sub == Triangulation.of([s]):
        return []
    fast = _collapse_fast(sub, s)
    if fast is not None:
        return list(_inverted(fast))
    if s.dim == s.ambient:
        return _complex_collapse(s, pieces)
    chart = chart_of(s.point_set)
    cpieces = [
        Polytope.of(PointSet.of(chart.to_chart(p) for p in px.hull)) for px in pieces
    ]
    moves = _complex_collapse(_map_simplex(s, chart.to_chart), cpieces)
    return list(_map_moves(moves, chart.from_chart))


def _complex_collapse(s: Simplex, pieces: list[Polytope]) -> list[Move]:
    """Moves from {s} to the canonical piece states, via the arrangement
    of the piece facet hulls (full-dimensional s)."""
    planes = set()
    for px in pieces:
        for f in px.facet_sets():
            planes.add(hyperplane_through(f.points))
    cutting = sorted(
        (h for h in planes if _cuts_interior(h, s.vertices)),
        key=Hyperplane.sort_key,
    )
    m_s, final_s, _ = _refine_stages(Polytope.of(s.point_set), cutting)
    piece_moves: list[Move] = []
    finals: set[Simplex] = set()
    for px in sorted(pieces, key=lambda p: p.hull.points):
        hx = [h for h in cutting if _cuts_interior(h, px.hull)]
        mx, fx, _ = _refine_stages(px, hx)
        piece_moves.extend(mx)
        finals.update(fx.cells)
    if Triangulation.of(finals) != final_s:
        raise SynthesisError("piece refinements do not match the cell refinement")
    return list(m_s) + list(_inverted(tuple(piece_moves)))


def _proposition_charted(alpha: Triangulation, t: Simplex) -> tuple[Move, ...]:
    """Collapse a triangulation of a simplex to the trivial one, charting
    embedded simplices to full dimension first."""
    if t.dim == t.ambient:
        return _proposition(alpha, t)
    chart = chart_of(t.point_set)
    calpha = _chart_triangulation(alpha, chart)
    ct = _map_simplex(t, chart.to_chart)
    moves = _proposition(calpha, ct)
    return _map_moves(moves, chart.from_chart)


# ---------------------------------------------------------------------------
# Newman-style starring collapse (starrings of a simplex)


@lru_cache(maxsize=65536)
def _facet_planes(t: Simplex) -> tuple[tuple[Simplex, Hyperplane], ...]:
    return tuple((f, hyperplane_through(f.vertices)) for f in t.facets())


@lru_cache(maxsize=16384)
def _lemma1(t: Simplex, a: Point, alpha: Triangulation) -> tuple[Move, ...]:
    """Moves from a starring alpha of the simplex t at a to {t}.

    Full-dimensional t.  The boundary case recurses into the facet
    opposite re-cone; the interior case dissects t by a hyperplane
    through a and an (n-2)-face and reduces to two boundary cases.
    """
    n = t.dim
    if t.classify(a) == kernel.OUTSIDE:
        raise GeometryError("star point outside the simplex")
    for c in alpha.cells:
        if a not in c.vertices:
            raise GeometryError("input is not a starring: cell without the star point")
    cols = None
    total = sum((chart_volume(c, cols) for c in alpha.cells), Fraction(0))
    if total != chart_volume(t, cols):
        raise GeometryError("starring does not cover the simplex")
    trivial = Triangulation.of([t])
    if alpha == trivial:
        return ()
    if n == 1:
        cells = sorted(alpha.cells)
        if len(cells) != 2:
            raise SynthesisError("segment starring must have two cells")
        b = ScriptBuilder(alpha)
        b.emit(Merge(cells[0], cells[1]))
        assert b.state == trivial
        return tuple(b.moves)

    builder = ScriptBuilder(alpha)
    # Collapse the facet triangulations induced by the bases.
    groups: dict[Simplex, list[Simplex]] = {}
    planes = _facet_planes(t)
    for c in sorted(alpha.cells):
        base = c.facet_opposite(a)
        for f, h in planes:
            if all(h.side(vv) == 0 for vv in base.vertices):
                groups.setdefault(f, []).append(base)
                break
        else:
            raise GeometryError("starring base does not lie in the boundary")
    for f, h in planes:
        on_facet = h.side(a) == 0
        if f in groups:
            if on_facet:
                raise SynthesisError("degenerate base on a facet through the point")
            bases = Triangulation.of(groups[f])
            moves = _proposition_charted(bases, f)
            builder.extend(_lift_moves(moves, a))
    star_t = star_polytope(Polytope.of(t.point_set), a)
    if builder.state != star_t:
        raise SynthesisError("facet collapse did not reach the canonical star")
    if a in t.vertices:
        # The only facet missing a is the opposite one: the star is {t}.
        assert builder.state == trivial
        return tuple(builder.moves)

    containing = [f for f, h in planes if h.side(a) == 0]
    if containing:
        # Boundary case: re-cone over the chosen facet through a.
        s0 = min(containing)
        v = next(x for x in t.vertices if x not in s0.vertices)
        rewritten = []
        for c in sorted(builder.state.cells):
            si = c.facet_opposite(a)
            rewritten.append(
                Simplex(tuple(x for x in si.vertices if x != v) + (a,))
            )
        base_star = Triangulation.of(rewritten)
        moves = _lemma1_charted(s0, a, base_star)
        builder.extend(_lift_moves(moves, v))
        assert builder.state == trivial, "boundary re-cone did not reach {t}"
        return tuple(builder.moves)

    # Interior case: build {t} -> star(t, a) in reverse.
    rb = ScriptBuilder(trivial)
    u, v = t.vertices[0], t.vertices[1]
    hinge = tuple(x for x in t.vertices if x not in (u, v))
    h = hyperplane_through(hinge + (a,))
    crossing = segment_crossing(u, v, h)
    if crossing is None:
        raise SynthesisError("interior dissection hyperplane misses the off-edge")
    w = crossing[1]
    rb.emit(Split(t, u, v, w))
    for tpm in sorted(rb.state.cells):
        sub = _lemma1(tpm, a, star_polytope(Polytope.of(tpm.point_set), a))
        rb.extend(_inverted(sub))
    for z in hinge:
        rest = tuple(x for x in hinge if x != z)
        c1 = Simplex(rest + (u, w, a))
        c2 = Simplex(rest + (w, v, a))
        rb.emit(Merge(c1, c2))
    if rb.state != star_t:
        raise SynthesisError("interior reverse path missed the canonical star")
    builder.extend(_inverted(rb.moves))
    assert builder.state == trivial
    return tuple(builder.moves)


def _lemma1_charted(t: Simplex, a: Point, alpha: Triangulation) -> tuple[Move, ...]:
    if t.dim == t.ambient:
        return _lemma1(t, a, alpha)
    chart = chart_of(t.point_set)
    moves = _lemma1(
        _map_simplex(t, chart.to_chart),
        chart.to_chart(a),
        _chart_triangulation(alpha, chart),
    )
    return _map_moves(moves, chart.from_chart)


# ---------------------------------------------------------------------------
# starrings of one polytope at one point


@lru_cache(maxsize=16384)
def _connect_starrings(p: Polytope, x: Point, st1: Triangulation, st2: Triangulation) -> tuple[Move, ...]:
    """Moves between two starrings of p at the same point x.

    The bases of a valid starring at x triangulate the union of the
    facets of p not containing x; connect the two base triangulations
    one dimension down and lift the script over the apex x.
    """
    if st1 == st2:
        return ()
    if p.dim == 1:
        raise SynthesisError("a segment has a unique starring at each point")
    bases1 = Triangulation.of(c.facet_opposite(x) for c in st1.cells)
    bases2 = Triangulation.of(c.facet_opposite(x) for c in st2.cells)
    moves = _connect_polyhedron(bases1, bases2)
    return _lift_moves(moves, x)


# ---------------------------------------------------------------------------
# the vertex-deletion sweep


@dataclass(frozen=True)
class SweepState:
    """Bookkeeping of the restarring sweep along the segment [a, v]."""

    hyperplanes: tuple[Hyperplane, ...]
    cut_points: tuple[Point, ...]
    apex_a: frozenset
    apex_v: frozenset


def _induced_facet_cells(pm: Polytope, a: Point, facet: kernel.Facet) -> tuple[Simplex, ...]:
    """Triangulation induced on a facet by the canonical starring at a.

    For a off the facet's hyperplane these are exactly the canonical
    facet cells (the bases of the star); for a on it they are the
    (n-1)-dimensional slices of the star's cells.
    """
    if facet.plane.side(a) != 0:
        return facet_triangulation(facet.vertices)
    out = set()
    n = pm.dim
    for c in star_polytope(pm, a).cells:
        onv = tuple(vv for vv in c.vertices if facet.plane.side(vv) == 0)
        if len(onv) >= n and kernel.affine_rank(onv) == n - 1:
            out.add(Simplex(onv))
    return tuple(sorted(out))


class _TagTracker:
    """Tracks which cells belong to the apex-v family during the sweep."""

    def __init__(self, vcells: Iterable[Simplex]):
        self.v = set(vcells)

    def apply(self, m: Move, to_v: bool) -> None:
        if isinstance(m, Split):
            if m.target in self.v:
                self.v.discard(m.target)
                if to_v:
                    self.v.update(m.results())
        else:
            took = m.first in self.v or m.second in self.v
            self.v.discard(m.first)
            self.v.discard(m.second)
            if took and to_v:
                self.v.add(m.results()[0])


@lru_cache(maxsize=8192)
def _sweep(p: Polytope, a: Point, v: Point) -> tuple[tuple[Move, ...], Triangulation]:
    """Transform star(P-, a) ∪ V_a into a starring of p at a.

    P- is p with the vertex v deleted; V_a cones the facets of P-
    strictly visible from v over v.  Hyperplanes of visible facets are
    processed in the order their cut points appear along the segment
    [a, v]: first the in-plane triangulation over each facet is
    restarred at the current cut point (moves lifted over both apexes),
    then every v-family cell holding the cut point is re-anchored to
    the next one by a split/merge pair.
    """
    pm = Polytope.of(PointSet.of(x for x in p.hull.points if x != v))
    star_a = star_polytope(pm, a)
    facets = oriented_facets(pm.hull)
    visible = [f for f in facets if f.plane.side(v) * f.outward > 0]
    induced = {f: _induced_facet_cells(pm, a, f) for f in visible}
    vcells = [s.with_vertex(v) for f in visible for s in induced[f]]
    tags = _TagTracker(vcells)
    state = Triangulation.of(set(star_a.cells) | set(vcells))
    builder = ScriptBuilder(state)

    def cut_param(h: Hyperplane) -> Fraction:
        ea = h.evaluate(a)
        ev = h.evaluate(v)
        return ea / (ea - ev)

    ordered = sorted(visible, key=lambda f: (cut_param(f.plane), f.plane.sort_key()))
    blocks: list[tuple[Fraction, list[kernel.Facet]]] = []
    for f in ordered:
        tv = cut_param(f.plane)
        if blocks and blocks[-1][0] == tv:
            blocks[-1][1].append(f)
        else:
            blocks.append((tv, [f]))
    values = [tv for tv, _ in blocks]

    def seg_point(t: Fraction) -> Point:
        return tuple(aa + t * (vv - aa) for aa, vv in zip(a, v))

    def emit_lifted(moves: Sequence[Move], apex: Point, to_v: bool) -> None:
        for m in moves:
            lifted = lift_move(m, apex)
            builder.emit(lifted)
            tags.apply(lifted, to_v)

    for bi, (tval, fs) in enumerate(blocks):
        x = seg_point(tval)
        x_next = seg_point(values[bi + 1]) if bi + 1 < len(blocks) else v
        for f in fs:
            plane = f.plane
            # Current in-plane family: bases of v-family cells in this plane.
            cur = sorted(
                c.facet_opposite(v)
                for c in tags.v
                if all(plane.side(vv) == 0 for vv in c.vertices if vv != v)
            )
            if not cur:
                raise SynthesisError("sweep lost the in-plane family")
            q = Polytope.of(PointSet.of(tuple(f.vertices.points) + (x,)))
            cur_tri = Triangulation.of(cur)
            if not validate_cover(cur_tri, q):
                raise SynthesisError("in-plane family does not tile [F, x]")
            target = star_polytope(q, x)
            moves = _connect_polyhedron(cur_tri, target)
            emit_lifted(moves, v, to_v=True)
            if tval > 0:
                emit_lifted(moves, a, to_v=False)
        # Re-anchor every v-family cell holding x.
        hot = sorted(c for c in tags.v if x in c.vertices)
        if tval == 0:
            if x_next != v:
                for c in hot:
                    m = Split(c, a, v, x_next)
                    builder.emit(m)
                    tags.apply(m, to_v=True)
                    r1, r2 = m.results()
                    tags.v.discard(r1 if a in r1.vertices else r2)
            else:
                # Cells already reach from a to v; they are final.
                for c in hot:
                    tags.v.discard(c)
        else:
            for c in hot:
                rest = tuple(z for z in c.vertices if z not in (x, v))
                partner = Simplex(rest + (a, x))
                if partner not in builder.state:
                    raise SynthesisError("re-anchor partner missing from the a-family")
                if x_next != v:
                    sp = Split(c, x, v, x_next)
                    builder.emit(sp)
                    tags.apply(sp, to_v=True)
                    middle = Simplex(rest + (x, x_next))
                    tags.v.discard(middle)
                    mg = Merge(partner, middle)
                    builder.emit(mg)
                    tags.apply(mg, to_v=False)
                else:
                    mg = Merge(partner, c)
                    builder.emit(mg)
                    tags.apply(mg, to_v=False)
    if tags.v:
        raise SynthesisError("sweep left unconsumed v-family cells")
    for c in builder.state.cells:
        if a not in c.vertices:
            raise SynthesisError("sweep result is not a starring at a")
    return tuple(builder.moves), builder.state


def _descend(p: Polytope, a: Point, v: Point) -> tuple[Move, ...]:
    """Moves from star(p, a) to star(P-, a) ∪ V_a (vertex v deleted)."""
    sweep_moves, s_a = _sweep(p, a, v)
    norm = _connect_starrings(p, a, s_a, star_polytope(p, a))
    return _inverted(tuple(sweep_moves) + tuple(norm))


@lru_cache(maxsize=8192)
def _lemma2_single(p: Polytope, a: Point, b: Point, v: Point) -> tuple[Move, ...]:
    """Restar p from a to b when both survive deleting the vertex v."""
    pm = Polytope.of(PointSet.of(x for x in p.hull.points if x != v))
    out: list[Move] = []
    out.extend(_descend(p, a, v))
    out.extend(_lemma2(pm, a, b))
    facets = oriented_facets(pm.hull)
    visible = [f for f in facets if f.plane.side(v) * f.outward > 0]
    for f in visible:
        ia = Triangulation.of(_induced_facet_cells(pm, a, f))
        ib = Triangulation.of(_induced_facet_cells(pm, b, f))
        out.extend(_lift_moves(_connect_polyhedron(ia, ib), v))
    out.extend(_inverted(_descend(p, b, v)))
    return tuple(out)


def _strictly_interior(p: Polytope, x: Point) -> bool:
    if not p.contains(x):
        return False
    return all(f.plane.side(x) * f.outward < 0 for f in oriented_facets(p.hull))


@lru_cache(maxsize=8192)
def _lemma2(p: Polytope, a: Point, b: Point) -> tuple[Move, ...]:
    """Moves from the canonical starring of p at a to the one at b."""
    if a == b:
        return ()
    if p.is_simplex():
        t = p.as_simplex()
        fwd = _lemma1(t, a, star_polytope(p, a))
        back = _lemma1(t, b, star_polytope(p, b))
        return tuple(fwd) + _inverted(back)
    n = p.dim
    hull = p.hull.points

    def keeps(v: Point, x: Point) -> bool:
        rest = PointSet.of(z for z in hull if z != v)
        return kernel.affine_rank(rest) == n and hull_contains(rest, x)

    both = [v for v in hull if keeps(v, a) and keeps(v, b)]
    if both:
        return _lemma2_single(p, a, b, max(both))
    va = [v for v in hull if keeps(v, a)]
    vb = [w for w in hull if keeps(w, b)]
    for v in sorted(va, reverse=True):
        for w in sorted(vb, reverse=True):
            if v == w:
                continue
            pv = PointSet.of(z for z in hull if z != v)
            pw = PointSet.of(z for z in hull if z != w)
            inter = kernel.polytope_intersection(pv, pw)
            if not inter or kernel.affine_rank(inter) != n:
                continue
            mid = tuple(
                (x + y) / 2
                for x, y in zip(vertex_barycenter(pv), vertex_barycenter(pw))
            )
            c: Optional[Point] = None
            if hull_contains(inter, mid) and _strictly_interior(p, mid):
                c = mid
            else:
                cand = vertex_barycenter(kernel.extreme_points(inter))
                if _strictly_interior(p, cand):
                    c = cand
            if c is None:
                continue
            return tuple(_lemma2_single(p, a, c, v)) + tuple(
                _lemma2_single(p, c, b, w)
            )
    raise SynthesisError("no admissible vertex deletion for the restarring")


# ---------------------------------------------------------------------------
# the arrangement induction on a simplex


@dataclass(frozen=True)
class ArrangementStage:
    """One stage of the hyperplane-arrangement refinement of a region."""

    stage_index: int
    cells: tuple[Polytope, ...]
    starred: Triangulation
    star_points: tuple[tuple[Polytope, Optional[Point]], ...]


@dataclass(frozen=True)
class _Region:
    poly: Polytope
    star_pt: Optional[Point]  # None for trivial simplex regions

    def sort_key(self):
        return self.poly.hull.points


def _make_region(p: Polytope) -> _Region:
    if p.is_simplex():
        return _Region(p, None)
    return _Region(p, p.barycenter())


def _refine_stages(
    start: Polytope, hyperplanes: Sequence[Hyperplane]
) -> tuple[tuple[Move, ...], Triangulation, tuple[ArrangementStage, ...]]:
    """Refine a region (from its canonical resting state) stage by stage.

    Each region cut by the current hyperplane is restarred at a point of
    the section, split starring-wise into the two halves, and each half
    is brought to its canonical resting state (trivial when a simplex,
    else starred at its own vertex-barycenter).  The final triangulation
    is a function of the region and hyperplane set only, which makes a
    whole-simplex run and per-piece runs meet in the same refinement.
    """
    first = _make_region(start)
    regions = [first]
    builder = ScriptBuilder(
        Triangulation.of([start.as_simplex()])
        if first.star_pt is None
        else star_polytope(start, first.star_pt)
    )
    stages = [
        ArrangementStage(
            0,
            tuple(r.poly for r in regions),
            builder.state,
            tuple((r.poly, r.star_pt) for r in regions),
        )
    ]
    n = start.dim
    for idx, h in enumerate(hyperplanes, start=1):
        new_regions: list[_Region] = []
        for region in sorted(regions, key=_Region.sort_key):
            pts = region.poly.hull
            if not _cuts_interior(h, pts):
                new_regions.append(region)
                continue
            if region.star_pt is None:
                s = region.poly.as_simplex()
                onv = [vv for vv in s.vertices if h.side(vv) == 0]
                if len(onv) == n - 1:
                    off = [vv for vv in s.vertices if h.side(vv) != 0]
                    crossing = segment_crossing(off[0], off[1], h)
                    if crossing is not None:
                        m = Split(s, off[0], off[1], crossing[1])
                        builder.emit(m)
                        for piece in m.results():
                            new_regions.append(_Region(Polytope.of(piece.point_set), None))
                        continue
            p = region.poly
            sec = hyperplane_section(p.hull, h)
            bpt = vertex_barycenter(sec)
            piece_neg = Polytope.of(kernel.halfspace_clip(p.hull, h, -1))
            piece_pos = Polytope.of(kernel.halfspace_clip(p.hull, h, +1))
            if region.star_pt is None:
                s = region.poly.as_simplex()
                builder.extend(_inverted(_lemma1(s, bpt, star_polytope(p, bpt))))
            else:
                builder.extend(_lemma2(p, region.star_pt, bpt))
            union = Triangulation.of(
                set(star_polytope(piece_neg, bpt).cells)
                | set(star_polytope(piece_pos, bpt).cells)
            )
            builder.extend(_connect_starrings(p, bpt, star_polytope(p, bpt), union))
            for piece in (piece_neg, piece_pos):
                if piece.is_simplex():
                    ps = piece.as_simplex()
                    builder.extend(_lemma1(ps, bpt, star_polytope(piece, bpt)))
                    new_regions.append(_Region(piece, None))
                else:
                    cc = piece.barycenter()
                    builder.extend(_lemma2(piece, bpt, cc))
                    new_regions.append(_Region(piece, cc))
        regions = new_regions
        stages.append(
            ArrangementStage(
                idx,
                tuple(r.poly for r in regions),
                builder.state,
                tuple((r.poly, r.star_pt) for r in regions),
            )
        )
    return tuple(builder.moves), builder.state, tuple(stages)


def _greedy_collapse(alpha: Triangulation, trivial: Triangulation) -> Optional[tuple[Move, ...]]:
    """Collapse by repeatedly merging the first mergeable pair; None when
    the greedy walk gets stuck before reaching the trivial triangulation."""
    state = alpha
    out: list[Move] = []
    while len(state) > 1:
        cells = state.canonical_cells()
        found = None
        for i in range(len(cells)):
            for j in range(i + 1, len(cells)):
                if mergeable(cells[i], cells[j]) is not None:
                    found = Merge(cells[i], cells[j])
                    break
            if found:
                break
        if found is None:
            return None
        out.append(found)
        state = apply_move(state, found)
    return tuple(out) if state == trivial else None


def _collapse_fast(alpha: Triangulation, t: Simplex) -> Optional[tuple[Move, ...]]:
    """Cheap collapse attempts for alpha -> {t}: a shared vertex makes
    alpha a starring (handled by the starring collapse), otherwise try a
    plain greedy merge.  None when neither applies."""
    trivial = Triangulation.of([t])
    if alpha == trivial:
        return ()
    common = set(next(iter(alpha.cells)).vertices)
    for c in alpha.cells:
        common &= set(c.vertices)
    if common:
        return _lemma1_charted(t, min(common), alpha)
    return _greedy_collapse(alpha, trivial)


@lru_cache(maxsize=16384)
def _proposition(alpha: Triangulation, t: Simplex) -> tuple[Move, ...]:
    """Moves from a triangulation alpha of the full-dimensional simplex t
    to the trivial triangulation {t}."""
    trivial = Triangulation.of([t])
    if alpha == trivial:
        return ()
    for c in alpha.cells:
        for vv in c.vertices:
            if t.classify(vv) == kernel.OUTSIDE:
                raise GeometryError("cell vertex outside the simplex")
    if sum((chart_volume(c) for c in alpha.cells), Fraction(0)) != chart_volume(t):
        raise GeometryError("input does not cover the simplex")
    n = t.dim
    if n == 1:
        builder = ScriptBuilder(alpha)
        _merge_runs(builder, alpha.canonical_cells())
        if builder.state != trivial:
            raise SynthesisError("segment collapse failed")
        return tuple(builder.moves)
    fast = _collapse_fast(alpha, t)
    if fast is not None:
        return fast
    planes = set()
    for c in alpha.cells:
        for f in c.facets():
            planes.add(hyperplane_through(f.vertices))
    cutting = sorted(
        (h for h in planes if _cuts_interior(h, t.vertices)), key=Hyperplane.sort_key
    )
    if not cutting:
        raise SynthesisError("nontrivial triangulation without cutting hyperplanes")
    moves_t, final_t, _ = _refine_stages(Polytope.of(t.point_set), cutting)
    all_moves: list[Move] = []
    final_cells: set[Simplex] = set()
    for s in alpha.canonical_cells():
        hs = [h for h in cutting if _cuts_interior(h, s.vertices)]
        ms, fs, _ = _refine_stages(Polytope.of(s.point_set), hs)
        all_moves.extend(ms)
        final_cells.update(fs.cells)
    if Triangulation.of(final_cells) != final_t:
        raise SynthesisError("per-cell refinements do not match the global one")
    return tuple(all_moves) + _inverted(moves_t)


# ---------------------------------------------------------------------------
# public surface


def _require_full_dim(dim: int, ambient: int) -> None:
    if dim != ambient:
        raise GeometryError(
            "move synthesis is restricted to full-dimensional inputs"
        )


def _finish(script_moves: Sequence[Move], source: Triangulation, target: Triangulation) -> MoveScript:
    """Replay-verify a move sequence and attach endpoint digests."""
    from .moves import replay

    script = MoveScript(tuple(script_moves)).with_digests(source, target)
    final = replay(source, script)
    if final != target:
        raise SynthesisError("internal replay verification failed")
    return script


def lemma1_starring(t: Simplex, a: Point, alpha: Triangulation) -> MoveScript:
    """Script from a starring of the simplex t at a to {t}."""
    _require_full_dim(t.dim, t.ambient)
    moves = _lemma1(t, a, alpha)
    return _finish(moves, alpha, Triangulation.of([t]))


def lemma2_restar(p: Polytope, a: Point, b: Point) -> MoveScript:
    """Script from the canonical starring of p at a to the one at b."""
    _require_full_dim(p.dim, p.ambient)
    if not p.contains(a) or not p.contains(b):
        raise GeometryError("restar points must lie in the polytope")
    moves = _lemma2(p, a, b)
    return _finish(moves, star_polytope(p, a), star_polytope(p, b))


def proposition_simplex(alpha: Triangulation, t: Optional[Simplex] = None) -> MoveScript:
    """Script from a triangulation of a simplex to the trivial one."""
    if t is None:
        ext = kernel.extreme_points(alpha.vertex_set())
        if len(ext) != alpha.dim + 1:
            raise GeometryError("input does not triangulate a simplex")
        t = Simplex(ext.points)
    _require_full_dim(t.dim, t.ambient)
    moves = _proposition(alpha, t)
    return _finish(moves, alpha, Triangulation.of([t]))


def theorem1_connect(a: Triangulation, b: Triangulation) -> MoveScript:
    """Script transforming the triangulation a into b.

    Both must triangulate the same polyhedron; the script passes through
    their common refinement.
    """
    _require_full_dim(a.dim, a.ambient)
    if b.ambient != a.ambient or b.dim != a.dim:
        raise kernel.DimensionMismatch("triangulations are not comparable")
    moves = _connect_polyhedron(a, b)
    return _finish(moves, a, b)


def refine_stages(t: Simplex, hyperplanes: Sequence[Hyperplane]):
    """Stage records of the arrangement refinement (for inspection)."""
    _, _, stages = _refine_stages(Polytope.of(t.point_set), tuple(hyperplanes))
    return stages
