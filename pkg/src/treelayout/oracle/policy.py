"""Deterministic spatial heuristics behind the offline oracle.

Scoring is defined in brute-force-checkable terms:

* A side's score is the number of its candidate cells on which the
  object, centered on that cell with the side-derived yaw, would sit
  legally (in bounds, overlap-free, relation satisfied).  For the
  anchor-facing question the score is simply the free-cell count.
* A run of grid columns/rows is feasible when some completion on the
  other axis yields a legal pose whose covered cells are all candidates.
  Runs are ranked by the distance of their center to the anchor along
  their axis, ties toward the lower start index.

``pose_from_starts`` is the single source of truth for turning a
(side, column start, row start) triple into a pose; the search uses it
for oracle-named runs too, so policy legality equals engine acceptance.
"""

from __future__ import annotations

import math

from treelayout import kernels
from treelayout.grid import (
    OccupancyGrid,
    Side,
    candidate_cells,
    orientation_from_rule,
    relation_satisfied,
    yaw_for_side,
    DegenerateDirection,
)
from treelayout.model import (
    AABB,
    LENGTH_EPS,
    OVERLAP_EPS,
    OrientationRule,
    Yaw,
    effective_aabb,
    q4,
)
from treelayout.oracle.queries import SpatialContext

#: Fixed side preference for tie-breaking, led by the anchor-facing side.
_BASE_ORDER = (Side.RIGHT, Side.LEFT, Side.BOTTOM, Side.TOP)

_FACING_SIDE = {0: Side.TOP, 90: Side.RIGHT, 180: Side.BOTTOM, 270: Side.LEFT}
_SIDE_YAW = {Side.TOP: Yaw.DEG_0, Side.RIGHT: Yaw.DEG_90, Side.BOTTOM: Yaw.DEG_180, Side.LEFT: Yaw.DEG_270}


def side_preference(anchor_yaw: Yaw) -> list[Side]:
    front = _FACING_SIDE[anchor_yaw.value]
    order = [front]
    for s in _BASE_ORDER:
        if s not in order:
            order.append(s)
    return order


def facing_yaw_for_side(side: Side) -> Yaw:
    """Yaw that faces toward the given side (anchor-facing question)."""
    return _SIDE_YAW[side]


def span_cells(extent: float, cell_size: float) -> int:
    return max(1, math.ceil(extent / cell_size - LENGTH_EPS))


def object_spans(ctx: SpatialContext, side: Side) -> tuple[int, int]:
    """(column span, row span) of the object at its side-derived yaw."""
    yaw0 = yaw_for_side(ctx.orientation_rule, ctx.anchor.yaw, side)
    box = effective_aabb(ctx.object_dims, yaw0, (0.0, 0.0))
    return span_cells(box.width, ctx.cell_size), span_cells(box.height, ctx.cell_size)


def pose_ok(ctx: SpatialContext, cx: float, cy: float, yaw: Yaw) -> bool:
    box = effective_aabb(ctx.object_dims, yaw, (cx, cy))
    bounds = AABB(0.0, 0.0, ctx.region_length, ctx.region_width)
    if not bounds.contains(box):
        return False
    if kernels.first_overlap(box.x0, box.y0, box.x1, box.y1, list(ctx.placed_boxes), OVERLAP_EPS) != -1:
        return False
    if ctx.relation is not None:
        return relation_satisfied(
            ctx.relation, box, ctx.anchor, ctx.anchor_dims,
            ctx.d_front, ctx.d_beside, ctx.d_around,
        )
    return True


def side_scores(ctx: SpatialContext) -> dict[Side, int]:
    anchor_box = ctx.anchor.aabb(ctx.anchor_dims)
    scores: dict[Side, int] = {}
    for side in Side:
        cells = candidate_cells(ctx.grid, side, anchor_box)
        if ctx.relation is None:
            scores[side] = len(cells)
            continue
        yaw0 = yaw_for_side(ctx.orientation_rule, ctx.anchor.yaw, side)
        n = 0
        for idx in cells:
            cx, cy = ctx.grid.cell_center(idx)
            if pose_ok(ctx, cx, cy, yaw0):
                n += 1
        scores[side] = n
    return scores


def choose_side(ctx: SpatialContext, avoid: tuple[str, ...], adversarial: bool) -> Side | None:
    scores = side_scores(ctx)
    order = side_preference(ctx.anchor.yaw)
    legal = [s for s in order if s.value not in avoid and scores[s] > 0]
    if not legal:
        return None
    if adversarial:
        return min(reversed(legal), key=lambda s: scores[s])
    return max(legal, key=lambda s: scores[s])


def final_yaw(ctx: SpatialContext, side: Side, center: tuple[float, float]) -> Yaw:
    """Resolve the definitive yaw once the center is known."""
    rule = ctx.orientation_rule
    yaw0 = yaw_for_side(rule, ctx.anchor.yaw, side)
    if rule in (OrientationRule.FACE_ANCHOR, OrientationRule.BACK_TO_ANCHOR):
        try:
            return orientation_from_rule(rule, ctx.anchor.yaw, (ctx.anchor.x, ctx.anchor.y), center)
        except DegenerateDirection:
            return yaw0
    return yaw0


def pose_from_starts(
    ctx: SpatialContext, side: Side, col_start: int, row_start: int
) -> tuple[float, float, Yaw]:
    """Pose implied by a column run and a row run (starts of each)."""
    m_cols, m_rows = object_spans(ctx, side)
    cx = q4((col_start + m_cols / 2.0) * ctx.cell_size)
    cy = q4((row_start + m_rows / 2.0) * ctx.cell_size)
    return cx, cy, final_yaw(ctx, side, (cx, cy))


def _rect_cells_ok(
    grid: OccupancyGrid, cand: set[int], col_start: int, m_cols: int, row_start: int, m_rows: int
) -> bool:
    if col_start < 0 or row_start < 0:
        return False
    if col_start + m_cols > grid.cols or row_start + m_rows > grid.rows:
        return False
    for r in range(row_start, row_start + m_rows):
        for c in range(col_start, col_start + m_cols):
            if grid.index(r, c) not in cand:
                return False
    return True


def _completion_ok(
    ctx: SpatialContext, cand: set[int], side: Side, col_start: int, row_start: int
) -> bool:
    m_cols, m_rows = object_spans(ctx, side)
    if not _rect_cells_ok(ctx.grid, cand, col_start, m_cols, row_start, m_rows):
        return False
    cx, cy, yaw = pose_from_starts(ctx, side, col_start, row_start)
    return pose_ok(ctx, cx, cy, yaw)


def _side_candidates(ctx: SpatialContext, side: Side) -> set[int]:
    return set(candidate_cells(ctx.grid, side, ctx.anchor.aabb(ctx.anchor_dims)))


def feasible_primary_starts(ctx: SpatialContext, side: Side) -> list[int]:
    """Starts of primary-axis runs that admit at least one legal completion.

    The primary axis is columns for left/right sides and rows for
    top/bottom sides.
    """
    cand = _side_candidates(ctx, side)
    m_cols, m_rows = object_spans(ctx, side)
    out: list[int] = []
    if side.horizontal:
        for c0 in range(0, ctx.grid.cols - m_cols + 1):
            if any(_completion_ok(ctx, cand, side, c0, r0) for r0 in range(0, ctx.grid.rows - m_rows + 1)):
                out.append(c0)
    else:
        for r0 in range(0, ctx.grid.rows - m_rows + 1):
            if any(_completion_ok(ctx, cand, side, c0, r0) for c0 in range(0, ctx.grid.cols - m_cols + 1)):
                out.append(r0)
    return out


def feasible_secondary_starts(ctx: SpatialContext, side: Side, primary_start: int) -> list[int]:
    cand = _side_candidates(ctx, side)
    m_cols, m_rows = object_spans(ctx, side)
    out: list[int] = []
    if side.horizontal:
        for r0 in range(0, ctx.grid.rows - m_rows + 1):
            if _completion_ok(ctx, cand, side, primary_start, r0):
                out.append(r0)
    else:
        for c0 in range(0, ctx.grid.cols - m_cols + 1):
            if _completion_ok(ctx, cand, side, c0, primary_start):
                out.append(c0)
    return out


def _run_distance(ctx: SpatialContext, side: Side, axis: str, start: int) -> float:
    m_cols, m_rows = object_spans(ctx, side)
    if axis == "cols":
        center = (start + m_cols / 2.0) * ctx.cell_size
        return abs(center - ctx.anchor.x)
    center = (start + m_rows / 2.0) * ctx.cell_size
    return abs(center - ctx.anchor.y)


def choose_run(
    ctx: SpatialContext,
    side: Side,
    axis: str,
    starts: list[int],
    avoid: tuple[int, ...],
    adversarial: bool,
) -> int | None:
    """Pick a run start: nearest to the anchor along the run axis, ties
    toward the lower index (adversarial: farthest, ties higher)."""
    legal = [s for s in starts if s not in avoid]
    if not legal:
        return None
    if adversarial:
        return max(legal, key=lambda s: (_run_distance(ctx, side, axis, s), s))
    return min(legal, key=lambda s: (_run_distance(ctx, side, axis, s), s))
