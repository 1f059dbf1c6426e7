"""Tangram pieces, placements, and exact validation.

Seven canonical pieces under the convention small-triangle leg = 1:
two large triangles (area 2 each), one medium triangle (area 1), two
small triangles (area 1/2 each), a unit square, and a parallelogram
(area 1, the only chiral piece).  Total area 8.

Placements rotate by multiples of 45 degrees and translate by ring
coordinates, so placed vertices stay exact and overlap is decided with
no tolerance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import ExactCoord, coord

Point = tuple[ExactCoord, ExactCoord]


class PieceKind(Enum):
    LARGE_TRIANGLE_1 = "LargeTriangle1"
    LARGE_TRIANGLE_2 = "LargeTriangle2"
    MEDIUM_TRIANGLE = "MediumTriangle"
    SMALL_TRIANGLE_1 = "SmallTriangle1"
    SMALL_TRIANGLE_2 = "SmallTriangle2"
    SQUARE = "Square"
    PARALLELOGRAM = "Parallelogram"


def _pts(*pairs) -> tuple[Point, ...]:
    out = []
    for x, y in pairs:
        out.append((x if isinstance(x, ExactCoord) else coord(x),
                    y if isinstance(y, ExactCoord) else coord(y)))
    return tuple(out)


_SQRT2 = coord(0, 1)

# Counterclockwise vertex lists anchored at the origin.
CANONICAL_VERTICES: dict[PieceKind, tuple[Point, ...]] = {
    PieceKind.LARGE_TRIANGLE_1: _pts((0, 0), (2, 0), (0, 2)),
    PieceKind.LARGE_TRIANGLE_2: _pts((0, 0), (2, 0), (0, 2)),
    PieceKind.MEDIUM_TRIANGLE: _pts((0, 0), (_SQRT2, 0), (0, _SQRT2)),
    PieceKind.SMALL_TRIANGLE_1: _pts((0, 0), (1, 0), (0, 1)),
    PieceKind.SMALL_TRIANGLE_2: _pts((0, 0), (1, 0), (0, 1)),
    PieceKind.SQUARE: _pts((0, 0), (1, 0), (1, 1), (0, 1)),
    PieceKind.PARALLELOGRAM: _pts((0, 0), (1, 0), (2, 1), (1, 1)),
}

VALID_ROTATIONS = (0, 45, 90, 135, 180, 225, 270, 315)

# (cos, sin) for each multiple of 45 degrees; sqrt(2)/2 = coord(0, 1/2).
_HALF_SQRT2 = coord(0, Fraction(1, 2))
ROTATION_TABLE: dict[int, tuple[ExactCoord, ExactCoord]] = {
    0: (coord(1), coord(0)),
    45: (_HALF_SQRT2, _HALF_SQRT2),
    90: (coord(0), coord(1)),
    135: (-_HALF_SQRT2, _HALF_SQRT2),
    180: (coord(-1), coord(0)),
    225: (-_HALF_SQRT2, -_HALF_SQRT2),
    270: (coord(0), coord(-1)),
    315: (_HALF_SQRT2, -_HALF_SQRT2),
}


@dataclass(frozen=True)
class Placement:
    """A rigid placement: optional mirror, rotation, then translation."""

    piece: PieceKind
    translation: Point = (coord(0), coord(0))
    rotation: int = 0
    mirrored: bool = False

    def __post_init__(self):
        if self.rotation not in VALID_ROTATIONS:
            raise ValueError(f"rotation must be a multiple of 45 in [0, 315], got {self.rotation}")
        if self.mirrored and self.piece is not PieceKind.PARALLELOGRAM:
            raise ValueError("only the parallelogram may be mirrored")

    def vertices(self) -> tuple[Point, ...]:
        """Placed vertices, counterclockwise."""
        pts = CANONICAL_VERTICES[self.piece]
        if self.mirrored:
            pts = tuple((-x, y) for x, y in reversed(pts))
        cos, sin = ROTATION_TABLE[self.rotation]
        tx, ty = self.translation
        return tuple(
            (x * cos - y * sin + tx, x * sin + y * cos + ty) for x, y in pts
        )


@dataclass(frozen=True)
class Tangram:
    """Seven placed pieces with stable integer labels 1-7."""

    id: str
    placements: tuple[Placement, ...]
    piece_ids: tuple[int, ...] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.piece_ids is None:
            object.__setattr__(self, "piece_ids", tuple(range(1, len(self.placements) + 1)))
        if len(self.piece_ids) != len(self.placements):
            raise ValueError("piece_ids and placements must have equal length")

    def pieces(self) -> Iterable[tuple[int, Placement]]:
        return zip(self.piece_ids, self.placements)

    def translated(self, dx: ExactCoord, dy: ExactCoord) -> "Tangram":
        moved = tuple(
            Placement(p.piece, (p.translation[0] + dx, p.translation[1] + dy),
                      p.rotation, p.mirrored)
            for p in self.placements
        )
        return Tangram(self.id, moved, self.piece_ids)


# -- polygon primitives ------------------------------------------------------


def polygon_area(points: Sequence[Point]) -> ExactCoord:
    """Exact unsigned shoelace area."""
    total = coord(0)
    n = len(points)
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        total = total + (x1 * y2 - x2 * y1)
    if total.sign() < 0:
        total = -total
    return total * coord(Fraction(1, 2))


def piece_area(kind: PieceKind) -> Fraction:
    """Area of a canonical piece (always rational)."""
    area = polygon_area(CANONICAL_VERTICES[kind])
    assert area.b == 0
    return area.a


def _axes(points: Sequence[Point]) -> list[Point]:
    n = len(points)
    axes = []
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        axes.append((-(y2 - y1), x2 - x1))
    return axes


def _projection_range(points: Sequence[Point], axis: Point) -> tuple[ExactCoord, ExactCoord]:
    ax, ay = axis
    lo = hi = points[0][0] * ax + points[0][1] * ay
    for x, y in points[1:]:
        d = x * ax + y * ay
        if d < lo:
            lo = d
        elif d > hi:
            hi = d
    return lo, hi


def interiors_disjoint(p: Sequence[Point], q: Sequence[Point]) -> bool:
    """True when the open interiors of two convex polygons do not meet.

    Separating-axis test over the edge normals of both polygons; weak
    separation (touching boundaries allowed) decides interior disjointness
    exactly for convex polygons.
    """
    for axis in _axes(p) + _axes(q):
        p_lo, p_hi = _projection_range(p, axis)
        q_lo, q_hi = _projection_range(q, axis)
        if p_hi <= q_lo or q_hi <= p_lo:
            return True
    return False


def closed_disjoint(p: Sequence[Point], q: Sequence[Point]) -> bool:
    """True when two convex polygons do not even touch."""
    for axis in _axes(p) + _axes(q):
        p_lo, p_hi = _projection_range(p, axis)
        q_lo, q_hi = _projection_range(q, axis)
        if p_hi < q_lo or q_hi < p_lo:
            return True
    return False


# -- validation ---------------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...]
    warnings: tuple[str, ...]


def validate_tangram(t: Tangram) -> ValidationReport:
    """Check piece inventory and pairwise interior disjointness.

    A disconnected silhouette is reported as a warning, never a violation.
    """
    violations: list[str] = []
    warnings: list[str] = []

    kinds = [p.piece for p in t.placements]
    if len(kinds) != 7 or set(kinds) != set(PieceKind):
        violations.append(
            f"expected exactly one placement of each of the 7 piece kinds, got {len(kinds)}"
        )
    if sorted(t.piece_ids) != list(range(1, len(t.placements) + 1)):
        violations.append(f"piece ids must be a permutation of 1..{len(t.placements)}")

    polys = [p.vertices() for p in t.placements]
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            if not interiors_disjoint(polys[i], polys[j]):
                violations.append(
                    f"pieces {t.piece_ids[i]} and {t.piece_ids[j]} have overlapping interiors"
                )

    if not violations and len(polys) > 1:
        # Union-find over the touching graph; closed contact joins pieces.
        parent = list(range(len(polys)))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(len(polys)):
            for j in range(i + 1, len(polys)):
                if not closed_disjoint(polys[i], polys[j]):
                    parent[find(i)] = find(j)
        if len({find(i) for i in range(len(polys))}) > 1:
            warnings.append("silhouette is disconnected")

    return ValidationReport(ok=not violations, violations=tuple(violations),
                            warnings=tuple(warnings))


def tangram_area(t: Tangram) -> ExactCoord:
    """Exact total area of the placed pieces (equals the silhouette area
    when interiors are disjoint)."""
    total = coord(0)
    for p in t.placements:
        total = total + polygon_area(p.vertices())
    return total


# -- the classic square -------------------------------------------------------


def canonical_square(id: str = "canonical-square") -> Tangram:
    """The classic tangram square (side 2*sqrt(2), area 8)."""
    s = _SQRT2
    h = coord(0, Fraction(1, 2))  # sqrt(2)/2
    th = coord(0, Fraction(3, 2))  # 3*sqrt(2)/2
    z = coord(0)
    two_s = coord(0, 2)
    placements = (
        Placement(PieceKind.LARGE_TRIANGLE_1, (s, s), 225),
        Placement(PieceKind.LARGE_TRIANGLE_2, (s, s), 135),
        Placement(PieceKind.MEDIUM_TRIANGLE, (two_s, two_s), 180),
        Placement(PieceKind.SMALL_TRIANGLE_1, (th, h), 315),
        Placement(PieceKind.SMALL_TRIANGLE_2, (s, s), 45),
        Placement(PieceKind.SQUARE, (s, s), 315),
        Placement(PieceKind.PARALLELOGRAM, (z, two_s), 315),
    )
    return Tangram(id, placements)


# -- composition file format ---------------------------------------------------
#
# One JSON document per tangram:
#   {"id": str,
#    "pieces": [{"pieceId": int, "kind": str,
#                "translation": [[[an, ad], [bn, bd]], [[an, ad], [bn, bd]]],
#                "rotation": int, "mirrored": bool}, ...]}
# Each coordinate component is the pair (a, b) of the ring element a + b*sqrt(2),
# and each of a, b is an integer fraction [numerator, denominator].


class CompositionError(ValueError):
    pass


def _fraction_to_json(f: Fraction) -> list[int]:
    return [f.numerator, f.denominator]


def _coord_to_json(c: ExactCoord) -> list[list[int]]:
    return [_fraction_to_json(c.a), _fraction_to_json(c.b)]


def _coord_from_json(value) -> ExactCoord:
    try:
        (an, ad), (bn, bd) = value
        return coord(Fraction(int(an), int(ad)), Fraction(int(bn), int(bd)))
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise CompositionError(f"malformed coordinate {value!r}") from exc


def serialize_composition(t: Tangram) -> str:
    pieces = []
    for piece_id, p in t.pieces():
        pieces.append({
            "pieceId": piece_id,
            "kind": p.piece.value,
            "translation": [_coord_to_json(p.translation[0]),
                            _coord_to_json(p.translation[1])],
            "rotation": p.rotation,
            "mirrored": p.mirrored,
        })
    return json.dumps({"id": t.id, "pieces": pieces}, indent=2) + "\n"


def parse_composition(document: str) -> Tangram:
    """Parse the composition file format; inverse of serialize_composition."""
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise CompositionError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or "id" not in data or "pieces" not in data:
        raise CompositionError("document must be an object with 'id' and 'pieces'")
    entries = data["pieces"]
    if not isinstance(entries, list) or len(entries) != 7:
        raise CompositionError(f"expected 7 pieces, got {len(entries) if isinstance(entries, list) else type(entries).__name__}")

    kind_by_name = {k.value: k for k in PieceKind}
    placements: list[Placement] = []
    piece_ids: list[int] = []
    for entry in entries:
        if not isinstance(entry, dict):
            raise CompositionError("piece entries must be objects")
        try:
            kind_name = entry["kind"]
            piece_id = int(entry["pieceId"])
            translation = entry["translation"]
            rotation = int(entry["rotation"])
            mirrored = bool(entry.get("mirrored", False))
        except (KeyError, TypeError, ValueError) as exc:
            raise CompositionError(f"malformed piece entry: {exc}") from exc
        if kind_name not in kind_by_name:
            raise CompositionError(f"unknown piece kind {kind_name!r}")
        if rotation not in VALID_ROTATIONS:
            raise CompositionError(f"rotation must be a multiple of 45 in [0, 315], got {rotation}")
        if not isinstance(translation, list) or len(translation) != 2:
            raise CompositionError("translation must be a pair of coordinates")
        tx = _coord_from_json(translation[0])
        ty = _coord_from_json(translation[1])
        try:
            placements.append(Placement(kind_by_name[kind_name], (tx, ty), rotation, mirrored))
        except ValueError as exc:
            raise CompositionError(str(exc)) from exc
        piece_ids.append(piece_id)
    return Tangram(str(data["id"]), tuple(placements), tuple(piece_ids))
