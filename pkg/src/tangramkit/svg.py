"""Deterministic SVG rendering of tangram compositions.

Output is a square viewBox padded with a white background; each piece is
one ``<path>`` with a stable ``id`` so callers can address pieces
individually.  Identical inputs produce byte-identical documents.
"""

from __future__ import annotations

from typing import Mapping

from .geometry import Tangram

# Fixed rendering constants, in world units (small-triangle leg = 1).
STROKE_WIDTH = 0.05
PADDING_RATIO = 0.08
COORD_DECIMALS = 4


class RenderError(ValueError):
    pass


def _fmt(value: float) -> str:
    text = f"{value:.{COORD_DECIMALS}f}"
    if text == f"-0.{'0' * COORD_DECIMALS}":
        text = f"0.{'0' * COORD_DECIMALS}"
    return text


def render_svg(t: Tangram, colors: Mapping[int, str], border_color: str = "white") -> str:
    """Render a tangram as an SVG document string.

    ``colors`` must assign a fill (CSS keyword or ``#000000``) to every
    piece id in the tangram.
    """
    missing = [pid for pid in t.piece_ids if pid not in colors]
    if missing:
        raise RenderError(f"missing fill color for piece ids {missing}")

    polys = [(pid, [(float(x), float(y)) for x, y in p.vertices()])
             for pid, p in t.pieces()]
    xs = [x for _, poly in polys for x, _ in poly]
    ys = [y for _, poly in polys for _, y in poly]
    min_x, max_x = min(xs), max(xs)
    min_y, max_y = min(ys), max(ys)
    side = max(max_x - min_x, max_y - min_y)
    pad = side * PADDING_RATIO
    box = side + 2 * pad
    # Center the bounding box inside the square viewport.
    origin_x = min_x - pad - (box - 2 * pad - (max_x - min_x)) / 2
    origin_y = min_y - pad - (box - 2 * pad - (max_y - min_y)) / 2

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_fmt(box)} {_fmt(box)}">',
        f'<rect x="0" y="0" width="{_fmt(box)}" height="{_fmt(box)}" fill="white"/>',
    ]
    for pid, poly in sorted(polys, key=lambda item: item[0]):
        # Flip y so the composition's +y axis points up on screen.
        cmds = []
        for i, (x, y) in enumerate(poly):
            op = "M" if i == 0 else "L"
            cmds.append(f"{op} {_fmt(x - origin_x)} {_fmt(box - (y - origin_y))}")
        cmds.append("Z")
        d = " ".join(cmds)
        lines.append(
            f'<path id="piece-{pid}" d="{d}" fill="{colors[pid]}" '
            f'stroke="{border_color}" stroke-width="{STROKE_WIDTH}" '
            f'stroke-linejoin="round"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
