"""
Exact tangram compositions and SVG rendering
============================================

A tangram is seven puzzle pieces placed in the plane.  All placements
live on a 45-degree grid, so every vertex coordinate is a + b*sqrt(2)
with rational a and b.  The exact._Coord type keeps that form closed
under the arithmetic geometry needs; overlap checks are therefore
decisions, not float comparisons.
"""

from fractions import Fraction

from tangramkit import (
    PieceKind,
    Placement,
    Tangram,
    canonical_square,
    coord,
    parse_composition,
    render_svg,
    serialize_composition,
    tangram_area,
    validate_tangram,
)
from tangramkit.exact import SQRT2

# coord(a, b) means a + b*sqrt(2) with rational a, b; products and sums
# stay in that form, so nothing is ever rounded
print("sqrt(2) * sqrt(2) =", float(SQRT2 * SQRT2))
print("(1 + s)(1 - s)    =", float((coord(1) + SQRT2) * (coord(1) - SQRT2)))
print("sqrt(2)/2 exactly =", coord(0, Fraction(1, 2)))

# The classic square: all seven pieces fill a 2*sqrt(2) x 2*sqrt(2) box.
square = canonical_square()
report = validate_tangram(square)
print("\ncanonical square valid:", report.ok)
print("total area (exact):", tangram_area(square) == coord(8))

# Validation is a real check: put the medium triangle on top of the
# square piece and the composition is rejected with a named violation.
placements = list(square.placements)
donor = next(p for p in placements if p.piece is PieceKind.SQUARE)
broken = [
    Placement(p.piece, donor.translation, donor.rotation, p.mirrored)
    if p.piece is PieceKind.MEDIUM_TRIANGLE else p
    for p in placements
]
bad = validate_tangram(Tangram("broken", tuple(broken)))
print("\nperturbed composition valid:", bad.ok)
for violation in bad.violations:
    print("  violation:", violation)

# Compositions serialize to a JSON document and parse back unchanged.
document = serialize_composition(square)
assert parse_composition(document) == square
print("\nserialized composition:", len(document), "bytes; round-trips exactly")

# Rendering: every piece becomes one <path id="piece-N"> so a client
# can recolor pieces without re-parsing geometry.
svg = render_svg(square, {pid: "black" for pid in square.piece_ids})
print("\nSVG render:", len(svg), "bytes")
print("first path line:",
      next(line for line in svg.splitlines() if "piece-1" in line).strip()[:78])
