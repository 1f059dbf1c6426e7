"""Selecting tangrams for dense annotation.

Tangrams are placed on a (mean log-perplexity, agreement) plane; the
sample combines periphery points from the convex hull, a uniform draw,
and one point per occupied cell of a 5x5 grid over the bounding box.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .corpus import AnalysisSet
from .metrics import MetricError, PerplexityParams, log_perplexity, psa

GRID_DIVISIONS = 5


@dataclass(frozen=True)
class SamplePlanePoint:
    tangram_id: str
    log_perplexity: float
    psa: float


def build_plane(s: AnalysisSet, params: PerplexityParams) -> list[SamplePlanePoint]:
    """One point per tangram; tangrams with fewer than 2 annotations are
    skipped with a warning."""
    points: list[SamplePlanePoint] = []
    for tangram_id in sorted(s.members):
        annotations = s.members[tangram_id]
        try:
            ppl = log_perplexity([a.whole for a in annotations], params)
            agreement = psa([a.segmentation() for a in annotations])
        except MetricError as exc:
            warnings.warn(f"skipping tangram {tangram_id!r}: {exc}")
            continue
        points.append(SamplePlanePoint(tangram_id, ppl.value, agreement.value))
    return points


@dataclass(frozen=True)
class DenseSample:
    ids: frozenset[str]
    periphery: tuple[str, ...]
    uniform: tuple[str, ...]
    grid: tuple[str, ...]
    hull_size: int
    grid_bounds: tuple[float, float, float, float]  # min_x, max_x, min_y, max_y


def _hull_candidates(points: Sequence[SamplePlanePoint]) -> tuple[list[int], int]:
    """Indices ordered by successive convex hulls (outermost first).

    Degenerate clouds (collinear or coincident) fall back to the input
    order; the outermost hull size is reported for provenance.
    """
    coords = np.array([(p.log_perplexity, p.psa) for p in points])
    remaining = list(range(len(points)))
    ordered: list[int] = []
    outer_size = 0
    while remaining:
        if len(remaining) < 3:
            ordered.extend(remaining)
            if outer_size == 0:
                outer_size = len(remaining)
            break
        try:
            hull = ConvexHull(coords[remaining])
        except QhullError:
            ordered.extend(remaining)
            if outer_size == 0:
                outer_size = len(remaining)
            break
        layer = sorted(remaining[i] for i in hull.vertices)
        if outer_size == 0:
            outer_size = len(layer)
        ordered.extend(layer)
        remaining = [i for i in remaining if i not in set(layer)]
    return ordered, outer_size


def _cell_index(value: float, lo: float, hi: float) -> int:
    """Half-open cells, except the maximal edge which closes the last cell."""
    if hi == lo:
        return 0
    i = int((value - lo) / (hi - lo) * GRID_DIVISIONS)
    return min(i, GRID_DIVISIONS - 1)


def dense_sample(
    points: Sequence[SamplePlanePoint],
    seed: int,
    n_periphery: int = 12,
    n_uniform: int = 25,
    n_grid: int = 25,
) -> DenseSample:
    """Draw disjoint periphery, uniform, and per-grid-cell samples."""
    total = n_periphery + n_uniform + n_grid
    if len(points) < total:
        raise ValueError(f"need at least {total} points, got {len(points)}")
    rng = random.Random(seed)

    # Periphery: hull vertices, outer layers first when the outermost
    # hull is smaller than the request.
    hull_order, hull_size = _hull_candidates(points)
    candidates = hull_order[: max(n_periphery, hull_size)]
    periphery = sorted(rng.sample(candidates, n_periphery))

    # Uniform draw from everything not yet picked.
    picked = set(periphery)
    pool = [i for i in range(len(points)) if i not in picked]
    uniform = sorted(rng.sample(pool, n_uniform))
    picked |= set(uniform)

    # One pick per occupied 5x5 cell; round-robin over occupied cells
    # when fewer than n_grid are occupied.
    xs = [p.log_perplexity for p in points]
    ys = [p.psa for p in points]
    bounds = (min(xs), max(xs), min(ys), max(ys))
    cells: dict[tuple[int, int], list[int]] = {}
    for i, p in enumerate(points):
        if i in picked:
            continue
        cell = (_cell_index(p.log_perplexity, bounds[0], bounds[1]),
                _cell_index(p.psa, bounds[2], bounds[3]))
        cells.setdefault(cell, []).append(i)

    grid: list[int] = []
    occupied = sorted(cells)
    while len(grid) < n_grid and occupied:
        next_round = []
        for cell in occupied:
            if len(grid) >= n_grid:
                break
            members = cells[cell]
            choice = rng.choice(members)
            members.remove(choice)
            grid.append(choice)
            if members:
                next_round.append(cell)
        occupied = next_round
    if len(grid) < n_grid:
        raise ValueError("not enough unpicked points to fill the grid sample")
    grid = sorted(grid)

    ids = lambda idx: tuple(points[i].tangram_id for i in idx)  # noqa: E731
    return DenseSample(
        ids=frozenset(ids(periphery) + ids(uniform) + ids(grid)),
        periphery=ids(periphery),
        uniform=ids(uniform),
        grid=ids(grid),
        hull_size=hull_size,
        grid_bounds=bounds,
    )
