"""JSON wire formats.

Rationals cross file boundaries as strings "p/q" (or "p" when q = 1);
no floating point appears in any file.  Emission is canonical: vertices
are sorted within simplices and simplices lexicographically, so equal
objects serialize to identical bytes and digests are well defined.
"""

from __future__ import annotations

import hashlib
import json
import re
from fractions import Fraction
from typing import Iterable

from .kernel import GeometryError, Point, PointSet
from .moves import Merge, Move, MoveScript, Split
from .triangulation import Simplex, Triangulation


class InputFormatError(ValueError):
    """An input file or argument failed to parse."""


_RATIONAL_RE = re.compile(r"^-?\d+(/[1-9]\d*)?$")


def format_rational(x: Fraction) -> str:
    return str(x)


def parse_rational(s: str) -> Fraction:
    if not isinstance(s, str) or not _RATIONAL_RE.match(s):
        raise InputFormatError(f"bad rational {s!r} (expected 'p/q' or 'p')")
    return Fraction(s)


def point_to_wire(p: Point) -> list[str]:
    return [format_rational(c) for c in p]


def point_from_wire(obj) -> Point:
    if not isinstance(obj, list) or not obj:
        raise InputFormatError(f"bad point {obj!r}")
    return tuple(parse_rational(c) for c in obj)


def simplex_to_wire(s: Simplex) -> list[list[str]]:
    return [point_to_wire(v) for v in s.vertices]


def simplex_from_wire(obj) -> Simplex:
    if not isinstance(obj, list) or len(obj) < 1:
        raise InputFormatError(f"bad simplex {obj!r}")
    try:
        return Simplex(tuple(point_from_wire(v) for v in obj))
    except GeometryError as e:
        raise InputFormatError(f"bad simplex: {e}") from e


def triangulation_to_obj(t: Triangulation) -> dict:
    return {
        "ambient": t.ambient,
        "dim": t.dim,
        "simplices": [simplex_to_wire(c) for c in t.canonical_cells()],
    }


def triangulation_from_obj(obj) -> Triangulation:
    if not isinstance(obj, dict):
        raise InputFormatError("triangulation file must hold a JSON object")
    for key in ("ambient", "dim", "simplices"):
        if key not in obj:
            raise InputFormatError(f"triangulation object missing {key!r}")
    try:
        t = Triangulation.of(simplex_from_wire(s) for s in obj["simplices"])
    except GeometryError as e:
        raise InputFormatError(str(e)) from e
    if t.ambient != obj["ambient"] or t.dim != obj["dim"]:
        raise InputFormatError(
            "declared ambient/dim do not match the simplices in the file"
        )
    return t


def dumps_canonical(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def triangulation_dumps(t: Triangulation) -> str:
    return dumps_canonical(triangulation_to_obj(t))


def triangulation_loads(text: str) -> Triangulation:
    return triangulation_from_obj(_loads(text))


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputFormatError(f"invalid JSON: {e}") from e


def triangulation_digest(t: Triangulation) -> str:
    payload = json.dumps(
        triangulation_to_obj(t), separators=(",", ":"), sort_keys=True
    ).encode()
    return hashlib.sha256(payload).hexdigest()


def move_to_obj(m: Move) -> dict:
    if isinstance(m, Split):
        return {
            "op": "split",
            "target": simplex_to_wire(m.target),
            "u": point_to_wire(m.u),
            "v": point_to_wire(m.v),
            "w": point_to_wire(m.w),
        }
    return {
        "op": "merge",
        "first": simplex_to_wire(m.first),
        "second": simplex_to_wire(m.second),
    }


def move_from_obj(obj) -> Move:
    if not isinstance(obj, dict) or "op" not in obj:
        raise InputFormatError(f"bad move {obj!r}")
    try:
        if obj["op"] == "split":
            return Split(
                simplex_from_wire(obj["target"]),
                point_from_wire(obj["u"]),
                point_from_wire(obj["v"]),
                point_from_wire(obj["w"]),
            )
        if obj["op"] == "merge":
            return Merge(
                simplex_from_wire(obj["first"]), simplex_from_wire(obj["second"])
            )
    except KeyError as e:
        raise InputFormatError(f"move missing field {e}") from e
    except GeometryError as e:
        raise InputFormatError(f"illegal move in file: {e}") from e
    raise InputFormatError(f"unknown move op {obj['op']!r}")


def script_to_obj(s: MoveScript) -> dict:
    return {
        "source_digest": s.source_digest,
        "target_digest": s.target_digest,
        "moves": [move_to_obj(m) for m in s.moves],
    }


def script_from_obj(obj) -> MoveScript:
    if not isinstance(obj, dict) or "moves" not in obj:
        raise InputFormatError("script file must hold a JSON object with moves")
    return MoveScript(
        tuple(move_from_obj(m) for m in obj["moves"]),
        obj.get("source_digest"),
        obj.get("target_digest"),
    )


def script_dumps(s: MoveScript) -> str:
    return dumps_canonical(script_to_obj(s))


def script_loads(text: str) -> MoveScript:
    return script_from_obj(_loads(text))


def pointset_to_obj(ps: PointSet | Iterable[Point]) -> dict:
    pts = ps.points if isinstance(ps, PointSet) else tuple(sorted(set(ps)))
    return {
        "ambient": len(pts[0]) if pts else 0,
        "points": [point_to_wire(p) for p in pts],
    }


def pointset_from_obj(obj) -> PointSet:
    if not isinstance(obj, dict) or "points" not in obj:
        raise InputFormatError("point file must hold a JSON object with points")
    pts = [point_from_wire(p) for p in obj["points"]]
    if not pts:
        raise InputFormatError("point file holds no points")
    if "ambient" in obj and any(len(p) != obj["ambient"] for p in pts):
        raise InputFormatError("declared ambient does not match the points")
    return PointSet.of(pts)


def pointset_dumps(ps: PointSet) -> str:
    return dumps_canonical(pointset_to_obj(ps))


def pointset_loads(text: str) -> PointSet:
    return pointset_from_obj(_loads(text))
