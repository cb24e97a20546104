"""Top-down occupancy grid, emoji cell naming, and spatial predicates.

A region of ``length x width`` meters is discretized into
``ceil(length/cell) x ceil(width/cell)`` cells, row-major with row 0 at
y = 0 (the serialized prompt prints the top row first).  Candidate cells
offered to the oracle are named with distinct emoji names so a language
model can answer positions by name; parsing maps names back to cells.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources

from treelayout import kernels
from treelayout.model import (
    AABB,
    LENGTH_EPS,
    Dim3,
    OrientationRule,
    PlacedObject,
    RegionPlan,
    SpatialRelation,
    Yaw,
)

# Grid markers used in serialized prompts.  These are the only token
# names with fixed meaning; they are excluded from the emoji vocabulary.
WALL_MARKER = "brick"
BOUNDARY_MARKER = "white_circle"
OCCUPIED_MARKER = "black_square"
ANCHOR_MARKER = "red_square"
FREE_MARKER = "light_blank"

MARKERS = (WALL_MARKER, BOUNDARY_MARKER, OCCUPIED_MARKER, ANCHOR_MARKER, FREE_MARKER)

FREE, OCCUPIED, ANCHOR_OCCUPIED = 0, 1, 2


class GridError(Exception):
    """Base class for grid construction and parse failures."""


class OutOfRegion(GridError):
    def __init__(self, object_id: str):
        super().__init__(f"placement outside region: {object_id}")
        self.object_id = object_id


class VocabularyExhausted(GridError):
    pass


class SelectionError(GridError):
    """An oracle reply that fails to parse; consumes one search attempt."""


class UnknownEmoji(SelectionError):
    def __init__(self, name: str):
        super().__init__(f"emoji {name!r} is not a candidate cell")
        self.name = name


class WrongCount(SelectionError):
    def __init__(self, got: int, expected: int):
        super().__init__(f"expected {expected} emoji names, got {got}")
        self.got = got
        self.expected = expected


class EmptyResponse(SelectionError):
    def __init__(self) -> None:
        super().__init__("no emoji names found in response")


class NonContiguousRun(SelectionError):
    def __init__(self, axis: str, indices: list[int]):
        super().__init__(f"selected {axis} are not one contiguous run: {indices}")
        self.axis = axis
        self.indices = indices


class DegenerateDirection(GridError):
    pass


class Side(str, Enum):
    """A side of the anchor in the top-down view."""

    LEFT = "left"
    RIGHT = "right"
    BOTTOM = "bottom"
    TOP = "top"

    @property
    def kernel_code(self) -> int:
        return {"left": 0, "right": 1, "bottom": 2, "top": 3}[self.value]

    @property
    def horizontal(self) -> bool:
        """True when the side displaces along x (columns are the primary axis)."""
        return self in (Side.LEFT, Side.RIGHT)


@dataclass(frozen=True)
class OccupancyGrid:
    cols: int
    rows: int
    cell_size: float
    codes: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.cols < 1 or self.rows < 1:
            raise ValueError("grid must have at least one row and column")
        if len(self.codes) != self.rows * self.cols:
            raise ValueError("occupancy array size mismatch")

    def index(self, row: int, col: int) -> int:
        return row * self.cols + col

    def row_of(self, idx: int) -> int:
        return idx // self.cols

    def col_of(self, idx: int) -> int:
        return idx % self.cols

    def cell_rect(self, idx: int) -> AABB:
        r, c = self.row_of(idx), self.col_of(idx)
        s = self.cell_size
        return AABB(c * s, r * s, (c + 1) * s, (r + 1) * s)

    def cell_center(self, idx: int) -> tuple[float, float]:
        r, c = self.row_of(idx), self.col_of(idx)
        s = self.cell_size
        return ((c + 0.5) * s, (r + 0.5) * s)

    def is_free(self, idx: int) -> bool:
        return self.codes[idx] == FREE


@dataclass(frozen=True)
class EmojiMap:
    """Deterministic assignment of emoji names to candidate cells.

    ``entries`` maps cell index -> name in (row, col) order; ``vocabulary``
    is the full ordered name list the assignment drew from (used to tell
    a stale emoji name apart from ordinary prose when parsing replies).
    """

    entries: dict[int, str]
    vocabulary: tuple[str, ...]
    _by_name: dict[str, int] = field(repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        by_name = {name: idx for idx, name in self.entries.items()}
        if len(by_name) != len(self.entries):
            raise ValueError("emoji names within one map must be unique")
        object.__setattr__(self, "_by_name", by_name)

    def __len__(self) -> int:
        return len(self.entries)

    def cell_of(self, name: str) -> int | None:
        return self._by_name.get(name)


def load_vocabulary() -> tuple[str, ...]:
    """The shipped ordered emoji-name vocabulary (one name per line)."""
    text = resources.files("treelayout.data").joinpath("emoji_vocabulary.txt").read_text("utf-8")
    names = tuple(line.strip() for line in text.splitlines() if line.strip())
    return names


def grid_dims(length: float, width: float, cell_size: float) -> tuple[int, int]:
    cols = max(1, math.ceil(length / cell_size - LENGTH_EPS))
    rows = max(1, math.ceil(width / cell_size - LENGTH_EPS))
    return cols, rows


def rasterize_rects(
    length: float,
    width: float,
    cell_size: float,
    rects: list[tuple[AABB, int]],
) -> OccupancyGrid:
    cols, rows = grid_dims(length, width, cell_size)
    flat = [(r.x0, r.y0, r.x1, r.y1, code) for r, code in rects]
    codes = kernels.rasterize_codes(cols, rows, cell_size, flat)
    return OccupancyGrid(cols, rows, cell_size, tuple(codes))


def rasterize(
    region: RegionPlan, placed: list[PlacedObject], cell_size: float
) -> OccupancyGrid:
    """Discretize the region's top-down view.

    A cell is occupied iff its rectangle intersects a placed footprint
    with positive area; the anchor's cells carry the anchor code.  A
    placement outside the region bounds raises :class:`OutOfRegion`.
    """
    bounds = AABB(0.0, 0.0, region.length, region.width)
    rects: list[tuple[AABB, int]] = []
    for p in placed:
        box = p.aabb(region.spec(p.spec_id).dims)
        if not bounds.contains(box):
            raise OutOfRegion(p.spec_id)
        code = ANCHOR_OCCUPIED if p.spec_id == region.anchor_id else OCCUPIED
        rects.append((box, code))
    return rasterize_rects(region.length, region.width, cell_size, rects)


def candidate_cells(grid: OccupancyGrid, side: Side, anchor_aabb: AABB) -> list[int]:
    """All free cells strictly on the given side of the anchor's AABB,
    in (row, col) order.

    An anchor rectangle reaching past the grid extent is tolerated: the
    sides it spills over simply have no cells (this happens when probing
    facings for a centered anchor that only fits rotated).
    """
    return kernels.free_cells_on_side(
        grid.cols,
        grid.rows,
        grid.cell_size,
        list(grid.codes),
        side.kernel_code,
        anchor_aabb.x0,
        anchor_aabb.y0,
        anchor_aabb.x1,
        anchor_aabb.y1,
    )


def assign_emojis(cells: list[int] | set[int], vocabulary: tuple[str, ...]) -> EmojiMap:
    """Name candidate cells in (row, col) order with successive vocabulary entries."""
    ordered = sorted(cells)
    if len(ordered) > len(vocabulary):
        raise VocabularyExhausted(
            f"{len(ordered)} candidate cells exceed vocabulary of {len(vocabulary)}"
        )
    return EmojiMap(dict(zip(ordered, vocabulary)), vocabulary)


def serialize_grid_prompt(
    grid: OccupancyGrid,
    emap: EmojiMap,
    wall_sides: frozenset[Side] = frozenset(Side),
) -> str:
    """Render the grid as one token row per line, top row first.

    A one-cell border ring is added around the grid: wall marker on room
    walls, boundary marker on interior region boundaries.  Candidate
    cells render as their assigned emoji name, occupied cells as the
    occupied/anchor markers, and remaining free cells as the blank marker.
    """
    for idx in emap.entries:
        if not 0 <= idx < grid.rows * grid.cols:
            raise ValueError(f"emoji map cell {idx} outside grid")

    def edge_marker(side: Side) -> str:
        return WALL_MARKER if side in wall_sides else BOUNDARY_MARKER

    lines: list[str] = []
    top = [WALL_MARKER] + [edge_marker(Side.TOP)] * grid.cols + [WALL_MARKER]
    bottom = [WALL_MARKER] + [edge_marker(Side.BOTTOM)] * grid.cols + [WALL_MARKER]
    lines.append(" ".join(top))
    for r in range(grid.rows - 1, -1, -1):
        row_tokens = [edge_marker(Side.LEFT)]
        for c in range(grid.cols):
            idx = grid.index(r, c)
            name = emap.entries.get(idx)
            if name is not None:
                row_tokens.append(name)
            elif grid.codes[idx] == ANCHOR_OCCUPIED:
                row_tokens.append(ANCHOR_MARKER)
            elif grid.codes[idx] == OCCUPIED:
                row_tokens.append(OCCUPIED_MARKER)
            else:
                row_tokens.append(FREE_MARKER)
        row_tokens.append(edge_marker(Side.RIGHT))
        lines.append(" ".join(row_tokens))
    lines.append(" ".join(bottom))
    return "\n".join(lines)


_TOKEN_RE = re.compile(r"[a-z0-9_]+")


def parse_emoji_selection(response: str, emap: EmojiMap, expected_count: int) -> list[int]:
    """Extract emoji names from an oracle reply and map them to cells.

    Names are matched case-insensitively against the map; tokens that
    belong to the vocabulary but name no current candidate raise
    :class:`UnknownEmoji`.  Other tokens are treated as prose and
    ignored.  Duplicated mentions count once; the result is ordered by
    the map's (row, col) order.
    """
    if emap is None or len(emap) == 0:
        raise ValueError("emoji map must be non-empty")
    vocab = set(emap.vocabulary)
    seen: set[str] = set()
    for token in _TOKEN_RE.findall(response.lower()):
        if emap.cell_of(token) is not None:
            seen.add(token)
        elif token in vocab and token not in MARKERS:
            raise UnknownEmoji(token)
    if not seen:
        raise EmptyResponse()
    if len(seen) != expected_count:
        raise WrongCount(len(seen), expected_count)
    picked = [(idx, name) for idx, name in emap.entries.items() if name in seen]
    return [idx for idx, _ in picked]


def contiguous_axis_run(grid: OccupancyGrid, cells: list[int], axis: str) -> list[int]:
    """Validate that cells identify one contiguous run of columns or rows.

    Returns the sorted axis indices; duplicates or holes raise
    :class:`NonContiguousRun`.
    """
    if axis not in ("cols", "rows"):
        raise ValueError(f"axis must be cols|rows, got {axis!r}")
    picker = grid.col_of if axis == "cols" else grid.row_of
    indices = sorted(picker(c) for c in cells)
    if len(set(indices)) != len(indices):
        raise NonContiguousRun(axis, indices)
    for a, b in zip(indices, indices[1:]):
        if b != a + 1:
            raise NonContiguousRun(axis, indices)
    return indices


def relation_satisfied(
    rel: SpatialRelation,
    candidate_aabb: AABB,
    anchor: PlacedObject,
    anchor_dims: Dim3,
    d_front: float = 1.5,
    d_beside: float = 0.5,
    d_around: float = 2.0,
) -> bool:
    """Geometric reading of the three anchor relations.

    front: candidate center in the open half-plane the anchor faces, its
    offset across the facing axis within half the anchor's facing edge,
    and edge gap at most ``d_front``.  beside: candidate center more
    sideways than forward/backward of the anchor center (left or right
    half-plane) with edge gap at most ``d_beside``.  around: center
    distance at most ``d_around``.
    """
    anchor_aabb = anchor.aabb(anchor_dims)
    cx, cy = candidate_aabb.center
    dx, dy = cx - anchor.x, cy - anchor.y
    fx, fy = anchor.yaw.facing
    along = dx * fx + dy * fy
    perp = dx * fy - dy * fx
    if rel is SpatialRelation.PLACE_AROUND:
        return math.hypot(dx, dy) <= d_around
    gap = anchor_aabb.gap_to(candidate_aabb)
    if rel is SpatialRelation.PLACE_FRONT:
        facing_edge = anchor_aabb.width if fy != 0 else anchor_aabb.height
        return along > 0 and abs(perp) <= facing_edge / 2.0 + LENGTH_EPS and gap <= d_front
    if rel is SpatialRelation.PLACE_BESIDE:
        return abs(perp) >= abs(along) - LENGTH_EPS and abs(perp) > LENGTH_EPS and gap <= d_beside
    raise ValueError(f"unknown relation {rel}")


def orientation_from_rule(
    rule: OrientationRule,
    anchor_yaw: Yaw,
    anchor_center: tuple[float, float],
    object_center: tuple[float, float],
) -> Yaw:
    """Resolve an object's yaw from its orientation rule and the anchor pose.

    face/back use the cardinal direction nearest the object-to-anchor
    vector; exact diagonal ties resolve toward the x axis.
    """
    if rule is OrientationRule.SAME_AS_ANCHOR:
        return anchor_yaw
    if rule is OrientationRule.OPPOSITE_ANCHOR:
        return anchor_yaw.opposite
    vx = anchor_center[0] - object_center[0]
    vy = anchor_center[1] - object_center[1]
    if vx == 0.0 and vy == 0.0:
        raise DegenerateDirection("object center coincides with anchor center")
    if abs(vx) >= abs(vy):
        face = Yaw.DEG_90 if vx > 0 else Yaw.DEG_270
    else:
        face = Yaw.DEG_0 if vy > 0 else Yaw.DEG_180
    if rule is OrientationRule.FACE_ANCHOR:
        return face
    if rule is OrientationRule.BACK_TO_ANCHOR:
        return face.opposite
    raise ValueError(f"unknown rule {rule}")


def yaw_for_side(rule: OrientationRule | None, anchor_yaw: Yaw, side: Side) -> Yaw:
    """Provisional yaw used while selecting cells, before the final center
    is known: face/back rules orient along the chosen side's axis."""
    if rule is None or rule is OrientationRule.SAME_AS_ANCHOR:
        return anchor_yaw
    if rule is OrientationRule.OPPOSITE_ANCHOR:
        return anchor_yaw.opposite
    toward_anchor = {
        Side.RIGHT: Yaw.DEG_270,
        Side.LEFT: Yaw.DEG_90,
        Side.TOP: Yaw.DEG_180,
        Side.BOTTOM: Yaw.DEG_0,
    }[side]
    return toward_anchor if rule is OrientationRule.FACE_ANCHOR else toward_anchor.opposite
