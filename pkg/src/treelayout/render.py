"""Deterministic top-down SVG rendering, with trace-step replay.

The full-scene render draws the room, region boundaries, and labeled
object rectangles (anchor filled red, a tick mark on the facing edge).
Given a step index and the trace log, the renderer instead replays the
first ``step`` events and draws the partial state at that point,
including objects that a later backtrack removed.
"""

from __future__ import annotations

import re

from treelayout.model import (
    EventKind,
    Parent,
    PlacedObject,
    Scene,
    TraceEvent,
    Yaw,
    effective_aabb,
)

SCALE = 100.0  # px per meter
MARGIN = 24.0

_POSE_RE = re.compile(r"x=(-?[0-9.]+)\s+y=(-?[0-9.]+)\s+yaw=(\d+)")
_SCOPE_RE = re.compile(r"scope=(\S+)")


def _rotate_local(dx: float, dy: float, yaw: Yaw) -> tuple[float, float]:
    if yaw is Yaw.DEG_0:
        return dx, dy
    if yaw is Yaw.DEG_90:
        return dy, -dx
    if yaw is Yaw.DEG_180:
        return -dx, -dy
    return -dy, dx


def replay_placements(scene: Scene, events: list[TraceEvent], step: int) -> list[PlacedObject]:
    """State after applying the first ``step`` trace events.

    Accepted events add a region- or supporter-local placement at their
    layer; a Backtrack event at a layer removes that layer's placement
    within its scope.  Local poses are lifted to room coordinates using
    the plan's region offsets and the replayed supporter poses.
    """
    if step < 0 or step > len(events):
        raise IndexError(f"step {step} outside 0..{len(events)}")
    live: dict[tuple[str, int], tuple[str, float, float, Yaw]] = {}
    for e in events[:step]:
        m_scope = _SCOPE_RE.search(e.detail)
        if not m_scope or e.layer < 1:
            continue
        scope = m_scope.group(1)
        if e.kind is EventKind.ACCEPTED:
            m = _POSE_RE.search(e.detail)
            if m:
                live[(scope, e.layer)] = (
                    e.object_id, float(m.group(1)), float(m.group(2)), Yaw.of(int(m.group(3))),
                )
        elif e.kind is EventKind.BACKTRACK:
            live.pop((scope, e.layer), None)

    specs = scene.spec_index()
    region_offsets = {r.id: scene.plan.region_x_offset(r.id) for r in scene.plan.regions}
    floor: dict[str, PlacedObject] = {}
    out: list[PlacedObject] = []
    for (scope, _layer), (oid, x, y, yaw) in live.items():
        if scope in region_offsets:
            p = PlacedObject(oid, x + region_offsets[scope], y, 0.0, yaw, Parent.floor(scope))
            floor[oid] = p
            out.append(p)
    for (scope, _layer), (oid, x, y, yaw) in live.items():
        if scope.startswith("top:"):
            sup_id = scope[len("top:"):]
            sup = floor.get(sup_id)
            if sup is None or sup_id not in specs:
                continue
            sup_dims = specs[sup_id].dims
            dx, dy = x - sup_dims.length / 2.0, y - sup_dims.depth / 2.0
            rx, ry = _rotate_local(dx, dy, sup.yaw)
            out.append(
                PlacedObject(
                    oid, sup.x + rx, sup.y + ry, sup_dims.height,
                    Yaw.of(yaw.value + sup.yaw.value), Parent.supporter(sup_id),
                )
            )
    return out


def render_scene(
    scene: Scene,
    step: int | None = None,
    events: list[TraceEvent] | None = None,
) -> str:
    """SVG text for the scene, or for a replayed partial state."""
    plan = scene.plan
    if step is None:
        placements = list(scene.placements)
    else:
        if events is None:
            events = list(scene.trace.events)
        placements = replay_placements(scene, events, step)

    specs = scene.spec_index()
    anchor_ids = {r.anchor_id for r in plan.regions}
    w_px = plan.length * SCALE + 2 * MARGIN
    h_px = plan.width * SCALE + 2 * MARGIN

    def sx(x: float) -> float:
        return MARGIN + x * SCALE

    def sy(y: float) -> float:
        return MARGIN + (plan.width - y) * SCALE

    parts: list[str] = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w_px:.1f}" height="{h_px:.1f}" '
        f'viewBox="0 0 {w_px:.1f} {h_px:.1f}">',
        f'<rect x="{sx(0):.1f}" y="{sy(plan.width):.1f}" width="{plan.length * SCALE:.1f}" '
        f'height="{plan.width * SCALE:.1f}" fill="#fbf7ef" stroke="#4a4a4a" stroke-width="3"/>',
    ]
    offset = 0.0
    for region in plan.regions[:-1]:
        offset += region.length
        parts.append(
            f'<line x1="{sx(offset):.1f}" y1="{sy(0):.1f}" x2="{sx(offset):.1f}" '
            f'y2="{sy(plan.width):.1f}" stroke="#9a9a9a" stroke-width="1.5" '
            f'stroke-dasharray="6 4"/>'
        )
    floor_ps = [p for p in placements if p.parent.kind == "floor"]
    supported_ps = [p for p in placements if p.parent.kind == "supporter"]
    for p in floor_ps + supported_ps:
        spec = specs.get(p.spec_id)
        if spec is None:
            continue
        box = effective_aabb(spec.dims, p.yaw, (p.x, p.y))
        if p.spec_id in anchor_ids:
            fill = "#d9534f"
        elif p.parent.kind == "supporter":
            fill = "#a8c7e8"
        else:
            fill = "#d8d8d0"
        parts.append(
            f'<rect x="{sx(box.x0):.1f}" y="{sy(box.y1):.1f}" width="{box.width * SCALE:.1f}" '
            f'height="{box.height * SCALE:.1f}" fill="{fill}" stroke="#333333" stroke-width="1"/>'
        )
        fx, fy = p.yaw.facing
        tick_len = min(box.width, box.height) / 2.0
        ex = p.x + fx * (box.width / 2.0 if fx else 0.0)
        ey = p.y + fy * (box.height / 2.0 if fy else 0.0)
        tx = p.x + fx * max(box.width / 2.0 - tick_len, 0.0) if fx else p.x
        ty = p.y + fy * max(box.height / 2.0 - tick_len, 0.0) if fy else p.y
        parts.append(
            f'<line x1="{sx(tx):.1f}" y1="{sy(ty):.1f}" x2="{sx(ex):.1f}" y2="{sy(ey):.1f}" '
            f'stroke="#1a1a1a" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{sx(p.x):.1f}" y="{sy(p.y):.1f}" font-size="11" '
            f'font-family="sans-serif" text-anchor="middle">{spec.category}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
