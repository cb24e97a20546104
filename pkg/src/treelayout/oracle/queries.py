"""Typed oracle queries, replies, and canonical fingerprinting.

Every query carries ``attempt`` (ordinal within the current budget) and
``round_no`` (ordinal of the layer visit), so re-asking after a failure
or a backtrack produces a distinct canonical text.  Fingerprints hash
the canonical text together with the prompt-template version, which
makes transcripts replayable only against the templates they were
recorded with.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from treelayout.grid import EmojiMap, OccupancyGrid, Side
from treelayout.model import (
    Dim3,
    OrientationRule,
    PlacedObject,
    RoomPlan,
    SpatialRelation,
)


@dataclass(frozen=True)
class OracleReply:
    """Raw reply text, preserved verbatim for transcripting.

    All structure is recovered downstream by the engine's parsers; a
    malformed reply is a failed attempt, not an oracle error.
    """

    text: str


@dataclass(frozen=True)
class SpatialContext:
    """Geometry an oracle needs to reason about one spatial question.

    The grid prompt is the text a language oracle sees; the structured
    fields let the deterministic heuristic answer the same question
    without parsing its own prompt.
    """

    scope: str
    object_id: str
    region_length: float
    region_width: float
    cell_size: float
    grid: OccupancyGrid
    placed_boxes: tuple[tuple[float, float, float, float], ...]
    anchor: PlacedObject
    anchor_dims: Dim3
    object_dims: Dim3
    relation: SpatialRelation | None
    orientation_rule: OrientationRule | None
    d_front: float
    d_beside: float
    d_around: float

    def canonical_text(self) -> str:
        """Everything the deterministic policy reads, so fingerprints
        separate any two states the policy could answer differently
        (the coarse grid raster alone does not)."""
        d = self.object_dims
        boxes = ";".join(
            f"{x0:.4f},{y0:.4f},{x1:.4f},{y1:.4f}" for x0, y0, x1, y1 in self.placed_boxes
        )
        rule = self.orientation_rule.value if self.orientation_rule else "-"
        rel = self.relation.value if self.relation else "facing"
        return (
            f"scope={self.scope}\nobject={self.object_id}\n"
            f"region={self.region_length:.4f}x{self.region_width:.4f}\n"
            f"cell={self.cell_size:.4f}\n"
            f"anchor={self.anchor.x:.4f},{self.anchor.y:.4f},{self.anchor.yaw.value}\n"
            f"anchor_dims={self.anchor_dims.length:.4f}x{self.anchor_dims.depth:.4f}\n"
            f"dims={d.length:.4f}x{d.depth:.4f}\nrelation={rel}\norientation={rule}\n"
            f"thresholds={self.d_front:.4f},{self.d_beside:.4f},{self.d_around:.4f}\n"
            f"boxes={boxes}"
        )


@dataclass(frozen=True)
class RoomQuery:
    prompt: str
    attempt: int = 1

    def canonical_text(self) -> str:
        return f"kind=room\nattempt={self.attempt}\nprompt={self.prompt}"


@dataclass(frozen=True)
class RegionQuery:
    room_type: str
    length: float
    width: float
    prompt: str
    attempt: int = 1

    def canonical_text(self) -> str:
        return (
            f"kind=regions\nattempt={self.attempt}\nroom_type={self.room_type}\n"
            f"length={self.length:.4f}\nwidth={self.width:.4f}\nprompt={self.prompt}"
        )


@dataclass(frozen=True)
class ObjectsQuery:
    region_id: str
    function: str
    length: float
    width: float
    room_type: str
    prompt: str
    attempt: int = 1

    def canonical_text(self) -> str:
        return (
            f"kind=objects\nattempt={self.attempt}\nregion={self.region_id}\n"
            f"function={self.function}\nlength={self.length:.4f}\nwidth={self.width:.4f}\n"
            f"room_type={self.room_type}\nprompt={self.prompt}"
        )


@dataclass(frozen=True)
class SupportedQuery:
    floor_object_id: str
    category: str
    top_length: float
    top_depth: float
    attempt: int = 1

    def canonical_text(self) -> str:
        return (
            f"kind=supported\nattempt={self.attempt}\nfloor_object={self.floor_object_id}\n"
            f"category={self.category}\ntop={self.top_length:.4f}x{self.top_depth:.4f}"
        )


@dataclass(frozen=True)
class SideQuery:
    """Which side of the anchor should the object go on?

    With ``relation`` None this is the anchor-facing question instead:
    which direction should the (centered) anchor face.
    """

    grid_prompt: str
    context: SpatialContext
    avoid: tuple[str, ...] = ()
    attempt: int = 1
    round_no: int = 1

    def canonical_text(self) -> str:
        return (
            f"kind=side\nattempt={self.attempt}\nround={self.round_no}\n"
            f"{self.context.canonical_text()}\n"
            f"avoid={','.join(sorted(self.avoid))}\ngrid:\n{self.grid_prompt}"
        )


@dataclass(frozen=True)
class SideEvalQuery:
    """Evaluate whether the chosen side has an appropriate position."""

    grid_prompt: str
    context: SpatialContext
    side: Side = Side.RIGHT
    attempt: int = 1
    round_no: int = 1

    def canonical_text(self) -> str:
        return (
            f"kind=side_eval\nattempt={self.attempt}\nround={self.round_no}\n"
            f"{self.context.canonical_text()}\n"
            f"side={self.side.value}\ngrid:\n{self.grid_prompt}"
        )


@dataclass(frozen=True)
class CellsQuery:
    """Name the emoji cells of a contiguous run of columns or rows."""

    grid_prompt: str
    context: SpatialContext
    emap: EmojiMap = field(default=None)  # type: ignore[assignment]
    expected_count: int = 1
    axis: str = "cols"  # cols | rows
    side: Side = Side.RIGHT
    primary_run: tuple[int, ...] = ()  # chosen first-axis indices, empty for the first step
    avoid: tuple[int, ...] = ()  # run start indices to not propose
    attempt: int = 1
    round_no: int = 1

    def canonical_text(self) -> str:
        names = ",".join(self.emap.entries.values()) if self.emap else ""
        return (
            f"kind=cells\nattempt={self.attempt}\nround={self.round_no}\n"
            f"{self.context.canonical_text()}\n"
            f"side={self.side.value}\naxis={self.axis}\ncount={self.expected_count}\n"
            f"primary={','.join(str(i) for i in self.primary_run)}\n"
            f"avoid={','.join(str(i) for i in sorted(self.avoid))}\n"
            f"cells={names}\ngrid:\n{self.grid_prompt}"
        )


@dataclass(frozen=True)
class FullLayoutQuery:
    """Single-shot full-layout request (IO ablation mode only)."""

    plan: RoomPlan
    plan_text: str
    attempt: int = 1

    def canonical_text(self) -> str:
        return f"kind=full_layout\nattempt={self.attempt}\nplan:\n{self.plan_text}"


OracleQuery = (
    RoomQuery
    | RegionQuery
    | ObjectsQuery
    | SupportedQuery
    | SideQuery
    | SideEvalQuery
    | CellsQuery
    | FullLayoutQuery
)

SPATIAL_QUERIES = (SideQuery, SideEvalQuery, CellsQuery)


def fingerprint(query: OracleQuery, template_version: str) -> str:
    payload = f"v={template_version}\n{query.canonical_text()}"
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]
