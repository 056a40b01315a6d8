"""The elementary move calculus.

A split dissects one n-simplex into two by a hyperplane through an
(n-2)-face; parametrized by the two off-face vertices (u, v) and the
cut point w strictly inside the open segment (u, v), which pins the
hyperplane exactly and makes legality an O(1) test.  A merge is the
exact inverse: two simplices sharing a facet whose union is again a
simplex.  Scripts address simplices by value (canonical vertex lists),
so replay is independent of any ordering.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Union

from .kernel import GeometryError, Point, PointSet, point_between
from .triangulation import Simplex, Triangulation


class MoveError(GeometryError):
    """An elementary move was illegal in its context."""


@dataclass(frozen=True)
class Split:
    """Dissect ``target`` into [B, u, w] and [B, w, v], B = target - {u, v}."""

    target: Simplex
    u: Point
    v: Point
    w: Point

    def __post_init__(self):
        if self.v < self.u:
            u, v = self.v, self.u
            object.__setattr__(self, "u", u)
            object.__setattr__(self, "v", v)
        if self.u not in self.target.vertices or self.v not in self.target.vertices:
            raise MoveError("split off-pair must be vertices of the target")
        if not point_between(self.w, self.u, self.v):
            raise MoveError("split point must lie strictly between u and v")

    def hinge(self) -> tuple[Point, ...]:
        return tuple(x for x in self.target.vertices if x not in (self.u, self.v))

    def results(self) -> tuple[Simplex, Simplex]:
        b = self.hinge()
        return Simplex(b + (self.u, self.w)), Simplex(b + (self.w, self.v))


@dataclass(frozen=True)
class Merge:
    """Replace two simplices by their union when it is again a simplex."""

    first: Simplex
    second: Simplex

    def __post_init__(self):
        if self.second < self.first:
            f, s = self.second, self.first
            object.__setattr__(self, "first", f)
            object.__setattr__(self, "second", s)
        if mergeable(self.first, self.second) is None:
            raise MoveError("simplices are not mergeable")

    def results(self) -> tuple[Simplex, Point]:
        merged = mergeable(self.first, self.second)
        assert merged is not None
        return merged


Move = Union[Split, Merge]


def mergeable(s1: Simplex, s2: Simplex) -> Optional[tuple[Simplex, Point]]:
    """The merged simplex and hinge vertex, when the union is a simplex.

    Present iff s1 and s2 share exactly n vertices (a common facet F)
    and some vertex w of F lies strictly between the two off-facet
    vertices; then the union is [F - {w}, u, v] and the pair is exactly
    a split of it at w.
    """
    if s1 == s2 or s1.dim != s2.dim or s1.ambient != s2.ambient:
        return None
    shared = set(s1.vertices) & set(s2.vertices)
    if len(shared) != s1.dim:
        return None
    u = next(x for x in s1.vertices if x not in shared)
    v = next(x for x in s2.vertices if x not in shared)
    for w in shared:
        if point_between(w, u, v):
            rest = tuple(x for x in s1.vertices if x not in (u, w))
            return Simplex(rest + (u, v)), w
    return None


def split(t: Triangulation, m: Split) -> Triangulation:
    """Apply a split; the target must be a cell of t."""
    if m.target not in t:
        raise MoveError("split target is not a cell of the triangulation")
    t1, t2 = m.results()
    return t.replace([m.target], [t1, t2])


def merge(t: Triangulation, m: Merge) -> Triangulation:
    """Apply a merge; both simplices must be cells of t."""
    if m.first not in t or m.second not in t:
        raise MoveError("merge operands are not cells of the triangulation")
    merged, _ = m.results()
    return t.replace([m.first, m.second], [merged])


def apply_move(t: Triangulation, m: Move) -> Triangulation:
    if isinstance(m, Split):
        return split(t, m)
    if isinstance(m, Merge):
        return merge(t, m)
    raise MoveError(f"unknown move {m!r}")


def invert_move(m: Move) -> Move:
    if isinstance(m, Split):
        t1, t2 = m.results()
        return Merge(t1, t2)
    merged, w = m.results()
    u = next(x for x in m.first.vertices if x not in m.second.vertices)
    v = next(x for x in m.second.vertices if x not in m.first.vertices)
    return Split(merged, u, v, w)


@dataclass(frozen=True)
class MoveScript:
    """Replayable sequence of moves witnessing triangulation equivalence."""

    moves: tuple[Move, ...]
    source_digest: Optional[str] = None
    target_digest: Optional[str] = None

    def __len__(self):
        return len(self.moves)

    def __iter__(self):
        return iter(self.moves)

    def __add__(self, other: "MoveScript") -> "MoveScript":
        return MoveScript(self.moves + other.moves)

    def with_digests(self, source: Triangulation, target: Triangulation) -> "MoveScript":
        from .serialize import triangulation_digest

        return MoveScript(
            self.moves, triangulation_digest(source), triangulation_digest(target)
        )


EMPTY_SCRIPT = MoveScript(())


def script_of(moves: Iterable[Move]) -> MoveScript:
    return MoveScript(tuple(moves))


def replay(
    t0: Triangulation,
    s: MoveScript,
    on_step: Optional[Callable[[int, Move, Triangulation, Triangulation], None]] = None,
) -> Triangulation:
    """Fold the script over t0 with per-step legality validation.

    Declared digests, when present, are checked against the start and
    final states.  Any illegal step aborts with its index and reason.
    """
    if s.source_digest is not None:
        from .serialize import triangulation_digest

        if triangulation_digest(t0) != s.source_digest:
            raise MoveError("replay source does not match the declared digest")
    t = t0
    for i, m in enumerate(s.moves):
        try:
            nxt = apply_move(t, m)
        except GeometryError as e:
            raise MoveError(f"step {i}: {e}") from e
        if on_step is not None:
            on_step(i, m, t, nxt)
        t = nxt
    if s.target_digest is not None:
        from .serialize import triangulation_digest

        if triangulation_digest(t) != s.target_digest:
            raise MoveError("replay result does not match the declared digest")
    return t


def invert(s: MoveScript) -> MoveScript:
    """Reverse the script, swapping splits and merges."""
    return MoveScript(
        tuple(invert_move(m) for m in reversed(s.moves)),
        s.target_digest,
        s.source_digest,
    )


def _neighbor_moves(t: Triangulation, candidates: PointSet):
    cells = t.canonical_cells()
    for s in cells:
        verts = s.vertices
        for i in range(len(verts)):
            for j in range(i + 1, len(verts)):
                for w in candidates:
                    if point_between(w, verts[i], verts[j]):
                        yield Split(s, verts[i], verts[j], w)
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            if mergeable(cells[i], cells[j]) is not None:
                yield Merge(cells[i], cells[j])


def bfs_oracle(
    a: Triangulation,
    b: Triangulation,
    candidates: PointSet,
    max_depth: int,
) -> Optional[MoveScript]:
    """Shortest move script from a to b with split points restricted to
    the candidate set; None when none exists within max_depth.

    Breadth-first search over the (finite) candidate-restricted move
    graph; an independent verifier for the synthesized scripts on tiny
    instances.
    """
    if a == b:
        return EMPTY_SCRIPT.with_digests(a, b)
    parents: dict[Triangulation, tuple[Optional[Triangulation], Optional[Move]]] = {
        a: (None, None)
    }
    frontier = deque([(a, 0)])
    while frontier:
        state, depth = frontier.popleft()
        if depth >= max_depth:
            continue
        for m in _neighbor_moves(state, candidates):
            try:
                nxt = apply_move(state, m)
            except MoveError:
                continue
            if nxt in parents:
                continue
            parents[nxt] = (state, m)
            if nxt == b:
                path = []
                cur: Optional[Triangulation] = nxt
                while cur is not None:
                    prev, mv = parents[cur]
                    if mv is not None:
                        path.append(mv)
                    cur = prev
                return MoveScript(tuple(reversed(path))).with_digests(a, b)
            frontier.append((nxt, depth + 1))
    return None
