"""Level-by-level construction of the hierarchical room plan.

Each level is one oracle query: room type and dims, then the functional
regions, then per-region floor objects with anchor and edges, then
supported objects per supportable floor object.  Replies are plain text;
the parsers here are deliberately tolerant (a malformed reply costs one
retry, up to :data:`BUILDER_RETRIES`, then :class:`OracleFailure`).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from treelayout.catalog import AssetCatalog, UnknownCategory, resolve_assets
from treelayout.model import (
    AnchorRule,
    Dim3,
    Edge,
    EventKind,
    ObjectSpec,
    OrientationRule,
    RegionPlan,
    RoomPlan,
    SearchTrace,
    SpatialRelation,
    SupportedSet,
    q4,
    validate_room_plan,
)
from treelayout.oracle.base import OracleFailure, OracleSession
from treelayout.oracle.queries import ObjectsQuery, RegionQuery, RoomQuery, SupportedQuery

BUILDER_RETRIES = 3

#: A region never gets more objects than this; extra proposals are dropped.
MAX_REGION_OBJECTS = 8
MAX_SUPPORTED_OBJECTS = 3
MIN_REGION_LENGTH = 1.0

#: Proposals are dropped once footprints would exceed this share of the
#: region area, so the search is not unsatisfiable by construction.
AREA_GUARD_RATIO = 0.7


class ParseError(ValueError):
    pass


class NotSupportable(ValueError):
    def __init__(self, object_id: str):
        super().__init__(f"object {object_id} cannot support others")
        self.object_id = object_id


@dataclass
class ObjectProposal:
    category: str
    dims: Dim3 | None
    anchor_rule: AnchorRule | None
    relation: SpatialRelation | None
    orientation: OrientationRule | None


class IdAllocator:
    """Room-unique object ids: category plus a running ordinal."""

    def __init__(self) -> None:
        self._counts: dict[str, int] = {}

    def make(self, category: str) -> str:
        n = self._counts.get(category, 0) + 1
        self._counts[category] = n
        return f"{category}_{n}"


# -- reply parsers ----------------------------------------------------------

_ROOM_TYPE_RE = re.compile(r"room[_ ]?type\s*[:=]\s*(.+)", re.IGNORECASE)
_LENGTH_RE = re.compile(r"length\s*[:=]\s*([0-9.]+)", re.IGNORECASE)
_WIDTH_RE = re.compile(r"width\s*[:=]\s*([0-9.]+)", re.IGNORECASE)


def parse_room_reply(text: str) -> tuple[str, float, float]:
    m_type = _ROOM_TYPE_RE.search(text)
    m_len = _LENGTH_RE.search(text)
    m_wid = _WIDTH_RE.search(text)
    if not (m_type and m_len and m_wid):
        raise ParseError(f"room reply missing fields: {text!r}")
    room_type = m_type.group(1).strip().lower()
    length, width = float(m_len.group(1)), float(m_wid.group(1))
    if not room_type or length <= 0 or width <= 0:
        raise ParseError(f"room reply has invalid values: {text!r}")
    return room_type, q4(length), q4(width)


_REGION_LINE_RE = re.compile(r"^\s*([a-z][a-z_ ]*?)\s*[:=]\s*([0-9.]+)\s*$", re.IGNORECASE)


def parse_region_reply(text: str) -> list[tuple[str, float]]:
    out: list[tuple[str, float]] = []
    for line in text.splitlines():
        m = _REGION_LINE_RE.match(line)
        if not m:
            continue
        fraction = float(m.group(2))
        if fraction <= 0:
            raise ParseError(f"non-positive region fraction in {line!r}")
        out.append((m.group(1).strip().lower(), fraction))
    if not out:
        raise ParseError(f"no regions parsed from {text!r}")
    return out


_OBJECT_LINE_RE = re.compile(
    r"^\s*([a-z][a-z_]*)\s+([0-9.]+)\s*x\s*([0-9.]+)\s*x\s*([0-9.]+)\s*\|(.+)$",
    re.IGNORECASE,
)


def _parse_object_line(line: str) -> ObjectProposal | None:
    m = _OBJECT_LINE_RE.match(line)
    if not m:
        return None
    category = m.group(1).lower()
    try:
        dims = Dim3(float(m.group(2)), float(m.group(3)), float(m.group(4)))
    except ValueError:
        dims = None
    fields = [f.strip().lower() for f in m.group(5).split("|") if f.strip()]
    if not fields:
        return None
    if fields[0] == "anchor":
        if len(fields) < 2:
            return None
        try:
            rule = AnchorRule(fields[1])
        except ValueError:
            return None
        return ObjectProposal(category, dims, rule, None, None)
    try:
        relation = SpatialRelation(fields[0])
    except ValueError:
        return None
    orientation: OrientationRule | None = None
    if len(fields) > 1:
        try:
            orientation = OrientationRule(fields[1])
        except ValueError:
            orientation = None
    return ObjectProposal(category, dims, None, relation, orientation)


def parse_objects_reply(text: str) -> list[ObjectProposal]:
    proposals = [p for p in (_parse_object_line(line) for line in text.splitlines()) if p]
    if not proposals:
        raise ParseError(f"no objects parsed from {text!r}")
    anchors = [p for p in proposals if p.anchor_rule is not None]
    if len(anchors) != 1:
        raise ParseError(f"expected exactly one anchor, got {len(anchors)}")
    return proposals


def parse_supported_reply(text: str) -> list[ObjectProposal]:
    if text.strip().lower() in ("none", ""):
        return []
    out = []
    for line in text.splitlines():
        p = _parse_object_line(line)
        if p is not None and p.anchor_rule is None:
            out.append(p)
    return out


# -- builders ----------------------------------------------------------------


def _retry(session: OracleSession, make_query, parse):
    last: Exception | None = None
    for attempt in range(1, BUILDER_RETRIES + 1):
        raw = session.ask(make_query(attempt))
        try:
            return parse(raw)
        except (ParseError, UnknownCategory) as exc:
            last = exc
    raise OracleFailure(f"oracle replies unusable after {BUILDER_RETRIES} attempts: {last}")


def build_room_level(prompt: str, session: OracleSession) -> tuple[str, tuple[float, float]]:
    if not prompt or not prompt.strip():
        raise ValueError("prompt must be non-empty")
    room_type, length, width = _retry(
        session, lambda a: RoomQuery(prompt=prompt, attempt=a), parse_room_reply
    )
    return room_type, (length, width)


def build_region_level(
    room_type: str, length: float, width: float, prompt: str, session: OracleSession
) -> list[tuple[str, float]]:
    """Functional regions with lengths that tile the room length exactly.

    Oracle fractions are rescaled proportionally; regions that would end
    up shorter than :data:`MIN_REGION_LENGTH` are merged away, smallest
    first, down to a single region if needed.
    """
    proposals = _retry(
        session,
        lambda a: RegionQuery(room_type=room_type, length=length, width=width, prompt=prompt, attempt=a),
        parse_region_reply,
    )[:3]
    while len(proposals) > 1:
        total = sum(f for _, f in proposals)
        if min(f / total * length for _, f in proposals) >= MIN_REGION_LENGTH:
            break
        proposals.remove(min(proposals, key=lambda p: p[1]))
    total = sum(f for _, f in proposals)
    lengths = [q4(f / total * length) for _, f in proposals[:-1]]
    lengths.append(q4(length - sum(lengths)))
    return [(function, ln) for (function, _), ln in zip(proposals, lengths)]


def _guard_objects(
    proposals: list[ObjectProposal],
    specs: list[ObjectSpec],
    region_area: float,
    trace: SearchTrace,
    scope: str,
) -> list[int]:
    """Indices of proposals kept under the footprint-area guard (anchor
    first and always kept); drops are recorded as layer-0 rejections."""
    anchor_i = next(i for i, p in enumerate(proposals) if p.anchor_rule is not None)
    kept = [anchor_i]
    total = specs[anchor_i].dims.footprint_area
    for i, spec in enumerate(specs):
        if i == anchor_i:
            continue
        if len(kept) >= MAX_REGION_OBJECTS:
            trace.record(0, spec.id, 0, EventKind.REJECTED, f"scope={scope} object cap")
            continue
        area = spec.dims.footprint_area
        if total + area > AREA_GUARD_RATIO * region_area:
            trace.record(
                0,
                spec.id,
                0,
                EventKind.REJECTED,
                f"scope={scope} area guard: {total + area:.2f} > "
                f"{AREA_GUARD_RATIO:.1f} x {region_area:.2f}",
            )
            continue
        kept.append(i)
        total += area
    return kept


def build_floor_object_level(
    region_id: str,
    function: str,
    length: float,
    width: float,
    room_type: str,
    prompt: str,
    session: OracleSession,
    catalog: AssetCatalog,
    trace: SearchTrace,
    ids: IdAllocator,
) -> tuple[list[ObjectSpec], str, AnchorRule, list[Edge]]:
    def parse_and_resolve(raw: str):
        proposals = parse_objects_reply(raw)
        drafts = [
            ObjectSpec(id=f"draft_{i}", category=p.category, dims=p.dims)
            for i, p in enumerate(proposals)
        ]
        return proposals, resolve_assets(drafts, catalog)

    proposals, resolved = _retry(
        session,
        lambda a: ObjectsQuery(
            region_id=region_id,
            function=function,
            length=length,
            width=width,
            room_type=room_type,
            prompt=prompt,
            attempt=a,
        ),
        parse_and_resolve,
    )
    specs_draft = [
        ObjectSpec(
            id=ids.make(p.category),
            category=p.category,
            dims=r.dims,
            supportable=r.supportable,
        )
        for p, r in zip(proposals, resolved)
    ]
    kept = _guard_objects(proposals, specs_draft, length * width, trace, region_id)
    specs = [specs_draft[i] for i in sorted(kept)]
    anchor_i = next(i for i, p in enumerate(proposals) if p.anchor_rule is not None)
    anchor_id = specs_draft[anchor_i].id
    edges = [
        Edge(specs_draft[i].id, proposals[i].relation, proposals[i].orientation)
        for i in sorted(kept)
        if i != anchor_i
    ]
    return specs, anchor_id, proposals[anchor_i].anchor_rule, edges


def build_supported_level(
    floor_object: ObjectSpec,
    session: OracleSession,
    catalog: AssetCatalog,
    trace: SearchTrace,
    ids: IdAllocator,
    scope: str,
) -> SupportedSet:
    if not floor_object.supportable:
        raise NotSupportable(floor_object.id)

    def parse_and_resolve(raw: str):
        proposals = parse_supported_reply(raw)
        drafts = [
            ObjectSpec(id=f"draft_{i}", category=p.category, dims=p.dims)
            for i, p in enumerate(proposals)
        ]
        return proposals, resolve_assets(drafts, catalog)

    proposals, resolved = _retry(
        session,
        lambda a: SupportedQuery(
            floor_object_id=floor_object.id,
            category=floor_object.category,
            top_length=floor_object.dims.length,
            top_depth=floor_object.dims.depth,
            attempt=a,
        ),
        parse_and_resolve,
    )
    specs: list[ObjectSpec] = []
    relations: list[SpatialRelation] = []
    orientations: list[OrientationRule | None] = []
    for p, r in zip(proposals, resolved):
        if len(specs) >= MAX_SUPPORTED_OBJECTS:
            break
        fits = r.dims.length < floor_object.dims.length and r.dims.depth < floor_object.dims.depth
        if not fits:
            trace.record(
                0,
                p.category,
                0,
                EventKind.REJECTED,
                f"scope={scope} larger than {floor_object.id} top face",
            )
            continue
        specs.append(
            ObjectSpec(id=ids.make(p.category), category=p.category, dims=r.dims,
                       supportable=r.supportable)
        )
        relations.append(p.relation)
        orientations.append(p.orientation)
    if not specs:
        return SupportedSet(objects=(), edges=())
    local_anchor = max(specs, key=lambda s: (s.dims.footprint_area, s.id))
    edges = tuple(
        Edge(s.id, rel or SpatialRelation.PLACE_AROUND, ori)
        for s, rel, ori in zip(specs, relations, orientations)
        if s.id != local_anchor.id
    )
    return SupportedSet(objects=tuple(specs), edges=edges)


def build_room_plan(
    prompt: str,
    session: OracleSession,
    catalog: AssetCatalog,
    trace: SearchTrace,
) -> RoomPlan:
    """Run all four levels and assemble a validated room plan."""
    room_type, (length, width) = build_room_level(prompt, session)
    region_specs = build_region_level(room_type, length, width, prompt, session)
    ids = IdAllocator()
    regions: list[RegionPlan] = []
    for i, (function, region_length) in enumerate(region_specs):
        region_id = f"r{i + 1}_{function.replace(' ', '_')}"
        specs, anchor_id, anchor_rule, edges = build_floor_object_level(
            region_id, function, region_length, width, room_type, prompt,
            session, catalog, trace, ids,
        )
        supported: dict[str, SupportedSet] = {}
        for spec in specs:
            if not spec.supportable:
                continue
            sub = build_supported_level(spec, session, catalog, trace, ids, region_id)
            if sub.objects:
                supported[spec.id] = sub
        regions.append(
            RegionPlan(
                id=region_id,
                function=function,
                length=region_length,
                width=width,
                objects=tuple(specs),
                anchor_id=anchor_id,
                anchor_rule=anchor_rule,
                edges=tuple(edges),
                supported=supported,
            )
        )
    plan = RoomPlan(
        room_type=room_type, length=length, width=width, regions=tuple(regions), prompt=prompt
    )
    violations = validate_room_plan(plan)
    if violations:
        raise RuntimeError(f"builder produced an invalid plan: {violations}")
    return plan
