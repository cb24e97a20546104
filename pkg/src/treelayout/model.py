"""Core domain types for room plans, placements, and search configuration.

Coordinate conventions used throughout the package:

* The room occupies ``[0, length] x [0, width]`` with x to the right and
  y up in the top-down view.  Regions tile the room along x and share its
  width.
* Object positions are footprint centers.  ``z`` is 0 for floor objects
  and equals the supporter height for supported objects.
* Orientation is one of four quarter-turns.  Yaw 0 faces +y, 90 faces +x,
  180 faces -y, 270 faces -x.  An object's footprint is ``length x depth``
  at yaw 0/180 and swaps extents at 90/270.

All values in meters are quantized to 4 decimals (:func:`q4`) at
construction boundaries so that canonical serialization round-trips
exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

#: Area tolerance used by every overlap decision in the package.  Two
#: footprints whose intersection area is at most this value (such as
#: rectangles sharing an edge) do not count as overlapping.
OVERLAP_EPS = 1e-9

#: Tolerance for length bookkeeping (region tiling, flush checks).
LENGTH_EPS = 1e-9


def q4(x: float) -> float:
    """Quantize a meter value to 4 decimals (0.1 mm)."""
    return round(float(x), 4)


class Yaw(Enum):
    """Quarter-turn orientation. The value is the angle in degrees."""

    DEG_0 = 0
    DEG_90 = 90
    DEG_180 = 180
    DEG_270 = 270

    @classmethod
    def of(cls, degrees: int) -> "Yaw":
        return cls(degrees % 360)

    def plus(self, degrees: int) -> "Yaw":
        return Yaw.of(self.value + degrees)

    @property
    def opposite(self) -> "Yaw":
        return self.plus(180)

    @property
    def facing(self) -> tuple[int, int]:
        """Unit vector of the facing direction."""
        return {0: (0, 1), 90: (1, 0), 180: (0, -1), 270: (-1, 0)}[self.value]

    @property
    def swaps_extents(self) -> bool:
        return self.value in (90, 270)


class SpatialRelation(str, Enum):
    """Spatial relation binding a non-anchor object to its region anchor."""

    PLACE_FRONT = "place_front"
    PLACE_BESIDE = "place_beside"
    PLACE_AROUND = "place_around"


class AnchorRule(str, Enum):
    """Placement rule for a region's anchor object."""

    ALONG_WALL = "place_along_wall"
    IN_CENTER = "place_in_center"
    AT_CORNER = "place_at_corner"


class OrientationRule(str, Enum):
    """Rule deriving a non-anchor object's yaw from the anchor pose."""

    FACE_ANCHOR = "face_anchor"
    BACK_TO_ANCHOR = "back_to_anchor"
    SAME_AS_ANCHOR = "same_as_anchor"
    OPPOSITE_ANCHOR = "opposite_anchor"


@dataclass(frozen=True)
class Dim3:
    """Object extents in meters: length (x at yaw 0), depth (y at yaw 0), height."""

    length: float
    depth: float
    height: float

    def __post_init__(self) -> None:
        for name in ("length", "depth", "height"):
            v = getattr(self, name)
            if not math.isfinite(v) or v <= 0:
                raise ValueError(f"Dim3.{name} must be finite and positive, got {v}")
        object.__setattr__(self, "length", q4(self.length))
        object.__setattr__(self, "depth", q4(self.depth))
        object.__setattr__(self, "height", q4(self.height))

    @property
    def footprint_area(self) -> float:
        return self.length * self.depth


@dataclass(frozen=True)
class AABB:
    """Axis-aligned rectangle given by min/max corners, in meters."""

    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self) -> None:
        if self.x1 < self.x0 or self.y1 < self.y0:
            raise ValueError(f"AABB corners out of order: {self}")

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def center(self) -> tuple[float, float]:
        return ((self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0)

    def contains(self, other: "AABB", eps: float = LENGTH_EPS) -> bool:
        return (
            other.x0 >= self.x0 - eps
            and other.y0 >= self.y0 - eps
            and other.x1 <= self.x1 + eps
            and other.y1 <= self.y1 + eps
        )

    def intersection_area(self, other: "AABB") -> float:
        w = min(self.x1, other.x1) - max(self.x0, other.x0)
        h = min(self.y1, other.y1) - max(self.y0, other.y0)
        if w <= 0.0 or h <= 0.0:
            return 0.0
        return w * h

    def overlaps(self, other: "AABB", eps: float = OVERLAP_EPS) -> bool:
        """Positive-area intersection test; shared edges do not overlap."""
        return self.intersection_area(other) > eps

    def gap_to(self, other: "AABB") -> float:
        """Edge-to-edge distance; 0 when the rectangles touch or overlap."""
        dx = max(other.x0 - self.x1, self.x0 - other.x1, 0.0)
        dy = max(other.y0 - self.y1, self.y0 - other.y1, 0.0)
        return math.hypot(dx, dy)


def effective_aabb(dims: Dim3, yaw: Yaw, center: tuple[float, float]) -> AABB:
    """Footprint rectangle of an object at the given yaw, centered on `center`.

    At yaw 0/180 the extents are (length, depth); at 90/270 they swap.
    """
    ex, ey = (dims.depth, dims.length) if yaw.swaps_extents else (dims.length, dims.depth)
    cx, cy = center
    return AABB(cx - ex / 2.0, cy - ey / 2.0, cx + ex / 2.0, cy + ey / 2.0)


@dataclass(frozen=True)
class ObjectSpec:
    """An object the plan wants in the scene: identity, category, and extents.

    ``dims`` may be None on a freshly proposed spec; asset resolution
    fills it from the catalog, and a plan-ready spec always carries dims.
    """

    id: str
    category: str
    dims: Dim3 | None = None
    supportable: bool = False
    description: str = ""

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("ObjectSpec.id must be non-empty")
        if not self.category:
            raise ValueError("ObjectSpec.category must be non-empty")


@dataclass(frozen=True)
class Edge:
    """Spatial relationship between a non-anchor object and its (implicit) anchor.

    ``orientation_rule`` may be None for supported-level edges, in which
    case the placement defaults to facing the same way as the local anchor.
    """

    object_id: str
    relation: SpatialRelation
    orientation_rule: OrientationRule | None = None


@dataclass(frozen=True)
class Parent:
    """What a placed object stands on: a region floor or a supporter's top face."""

    kind: str  # "floor" | "supporter"
    ref: str  # region id or supporter object id

    def __post_init__(self) -> None:
        if self.kind not in ("floor", "supporter"):
            raise ValueError(f"Parent.kind must be floor|supporter, got {self.kind!r}")

    @classmethod
    def floor(cls, region_id: str) -> "Parent":
        return cls("floor", region_id)

    @classmethod
    def supporter(cls, object_id: str) -> "Parent":
        return cls("supporter", object_id)


@dataclass(frozen=True)
class PlacedObject:
    """A resolved pose for one object spec.

    Positions are footprint centers.  Whether they are region-local or
    room-absolute depends on context: the search works region-locally and
    composition translates into room coordinates.
    """

    spec_id: str
    x: float
    y: float
    z: float
    yaw: Yaw
    parent: Parent

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", q4(self.x))
        object.__setattr__(self, "y", q4(self.y))
        object.__setattr__(self, "z", q4(self.z))

    def aabb(self, dims: Dim3) -> AABB:
        return effective_aabb(dims, self.yaw, (self.x, self.y))


@dataclass(frozen=True)
class SupportedSet:
    """Objects to be placed on one supportable floor object, plus their edges."""

    objects: tuple[ObjectSpec, ...]
    edges: tuple[Edge, ...]


@dataclass(frozen=True)
class RegionPlan:
    """One functional region: its object set, anchor, and edge set."""

    id: str
    function: str
    length: float
    width: float
    objects: tuple[ObjectSpec, ...]
    anchor_id: str
    anchor_rule: AnchorRule
    edges: tuple[Edge, ...]
    supported: dict[str, SupportedSet] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "length", q4(self.length))
        object.__setattr__(self, "width", q4(self.width))

    def spec(self, object_id: str) -> ObjectSpec:
        for s in self.objects:
            if s.id == object_id:
                return s
        raise KeyError(object_id)

    def edge_for(self, object_id: str) -> Edge | None:
        for e in self.edges:
            if e.object_id == object_id:
                return e
        return None


@dataclass(frozen=True)
class RoomPlan:
    """The full hierarchical plan for one room."""

    room_type: str
    length: float
    width: float
    regions: tuple[RegionPlan, ...]
    prompt: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "length", q4(self.length))
        object.__setattr__(self, "width", q4(self.width))

    def region_x_offset(self, region_id: str) -> float:
        off = 0.0
        for r in self.regions:
            if r.id == region_id:
                return q4(off)
            off += r.length
        raise KeyError(region_id)

    def all_specs(self) -> list[ObjectSpec]:
        out: list[ObjectSpec] = []
        for r in self.regions:
            out.extend(r.objects)
            for sub in r.supported.values():
                out.extend(sub.objects)
        return out


class SearchMode(str, Enum):
    """Reasoning mode: single-shot, no-backtracking chain, or full tree search."""

    IO = "io"
    COT = "cot"
    TREE = "tree"


@dataclass(frozen=True)
class SearchConfig:
    """Attempt budgets and knobs for one generation run.

    Default budgets: 3 attempts for anchor objects,
    1 for others, 2 for the side step, 1 for the axis steps.  CoT mode
    forces every budget to 1.  The relation thresholds are edge-to-edge
    clearances used by the relation predicates.
    """

    k_global_anchor: int = 3
    k_global_other: int = 1
    k_local_side: int = 2
    k_local_axis: int = 1
    mode: SearchMode = SearchMode.TREE
    cell_size: float = 0.25
    seed: int = 0
    p_adv: float = 0.0
    d_front: float = 1.5
    d_beside: float = 0.5
    d_around: float = 2.0

    def __post_init__(self) -> None:
        for name in ("k_global_anchor", "k_global_other", "k_local_side", "k_local_axis"):
            if getattr(self, name) < 1:
                raise ValueError(f"SearchConfig.{name} must be >= 1")
        if self.cell_size <= 0:
            raise ValueError("SearchConfig.cell_size must be positive")
        if not 0.0 <= self.p_adv <= 1.0:
            raise ValueError("SearchConfig.p_adv must be in [0, 1]")
        if self.mode is SearchMode.COT:
            for name in ("k_global_anchor", "k_global_other", "k_local_side", "k_local_axis"):
                object.__setattr__(self, name, 1)


class EventKind(str, Enum):
    PROPOSED = "proposed"
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    BACKTRACK = "backtrack"


@dataclass(frozen=True)
class TraceEvent:
    """One search event; the stable field set of the trace log."""

    layer: int
    object_id: str
    attempt_no: int
    kind: EventKind
    detail: str


class SearchTrace:
    """Append-only event log of one generation run.

    Events are recorded in occurrence order.  A Backtrack event at layer
    L means the object accepted at layer L (within the scope named in its
    detail) was removed and the layer is being revisited.
    """

    def __init__(self) -> None:
        self.events: list[TraceEvent] = []
        self.oracle_calls: int = 0

    def record(
        self, layer: int, object_id: str, attempt_no: int, kind: EventKind, detail: str
    ) -> None:
        self.events.append(TraceEvent(layer, object_id, attempt_no, kind, detail))

    def count(self, kind: EventKind) -> int:
        return sum(1 for e in self.events if e.kind is kind)

    @property
    def counters(self) -> dict[str, int]:
        return {k.value: self.count(k) for k in EventKind}

    def summary(self) -> dict[str, int]:
        out = dict(sorted(self.counters.items()))
        out["events"] = len(self.events)
        out["oracle_calls"] = self.oracle_calls
        return out


@dataclass(frozen=True)
class Scene:
    """A composed result: the plan, room-absolute placements, and the trace."""

    plan: RoomPlan
    placements: tuple[PlacedObject, ...]
    trace: SearchTrace
    unsat_regions: tuple[str, ...] = ()

    def spec_index(self) -> dict[str, ObjectSpec]:
        return {s.id: s for s in self.plan.all_specs()}


def validate_room_plan(plan: RoomPlan) -> list[str]:
    """Check every structural invariant of a room plan.

    Returns a list of human-readable violations; an empty list means the
    plan is well-formed.  Violations are data, not exceptions.
    """
    violations: list[str] = []
    if plan.length <= 0 or plan.width <= 0:
        violations.append(f"room dims must be positive, got {plan.length}x{plan.width}")
    total = sum(r.length for r in plan.regions)
    if abs(total - plan.length) > 1e-9:
        violations.append(f"region lengths sum {total:g} != room length {plan.length:g}")
    seen_ids: set[str] = set()
    for r in plan.regions:
        if abs(r.width - plan.width) > 1e-9:
            violations.append(f"region {r.id}: width {r.width:g} != room width {plan.width:g}")
        if r.length <= 0:
            violations.append(f"region {r.id}: length must be positive")
        member_ids = [s.id for s in r.objects]
        for s in r.objects:
            if s.dims is None:
                violations.append(f"region {r.id}: object {s.id} has unresolved dims")
        for oid in member_ids:
            if oid in seen_ids:
                violations.append(f"region {r.id}: duplicate object id {oid}")
            seen_ids.add(oid)
        if r.anchor_id not in member_ids:
            violations.append(f"region {r.id}: anchor {r.anchor_id} not in object set")
        edge_counts: dict[str, int] = {}
        for e in r.edges:
            edge_counts[e.object_id] = edge_counts.get(e.object_id, 0) + 1
        for oid, n in edge_counts.items():
            if n > 1:
                violations.append(f"region {r.id}: duplicate edge for {oid}")
            if oid == r.anchor_id:
                violations.append(f"region {r.id}: anchor {oid} must not carry an edge")
            if oid not in member_ids:
                violations.append(f"region {r.id}: edge for unknown object {oid}")
        for oid in member_ids:
            if oid != r.anchor_id and edge_counts.get(oid, 0) == 0:
                violations.append(f"region {r.id}: object {oid} has no edge")
        for sup_id, sub in r.supported.items():
            if sup_id not in member_ids:
                violations.append(f"region {r.id}: supported set on unknown object {sup_id}")
                continue
            sup_spec = r.spec(sup_id)
            if not sup_spec.supportable:
                violations.append(f"region {r.id}: {sup_id} is not supportable")
            for s in sub.objects:
                if s.id in seen_ids:
                    violations.append(f"region {r.id}: duplicate object id {s.id}")
                seen_ids.add(s.id)
                if s.dims is None or sup_spec.dims is None:
                    violations.append(f"region {r.id}: unresolved dims around {s.id}")
                elif not (
                    s.dims.length < sup_spec.dims.length and s.dims.depth < sup_spec.dims.depth
                ):
                    violations.append(
                        f"region {r.id}: supported {s.id} does not fit strictly "
                        f"inside {sup_id} top face"
                    )
    return violations
