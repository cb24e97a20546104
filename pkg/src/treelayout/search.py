"""Global-local tree search over object placements.

The global search is a DFS over objects (anchor first, then descending
footprint area) with a per-layer attempt budget.  Backtracking removes
the previous object and revisits its layer with a fresh budget; poses
whose subtree failed are excluded from later visits, and re-proposed
anchor poses must differ in (wall, yaw) from every earlier visit.  Total
anchor-layer visits are capped by the anchor budget, which bounds the
whole search.

The local search places one object in three oracle-guided steps: side of
the anchor, then the grid run on the side's primary axis (columns for
left/right, rows for top/bottom), then the other axis.  Side choices are
oracle-evaluated before descending; completed poses are checked
geometrically.  A failed local search consumes exactly one global
attempt.

CoT mode degenerates every budget to 1 and never backtracks: an object
that fails to place is skipped.  IO mode asks for the whole layout in
one query and validates without repairing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from functools import lru_cache

from treelayout import kernels
from treelayout.grid import (
    AABB,
    OccupancyGrid,
    SelectionError,
    Side,
    assign_emojis,
    candidate_cells,
    contiguous_axis_run,
    load_vocabulary,
    parse_emoji_selection,
    rasterize,
    relation_satisfied,
    serialize_grid_prompt,
)
from treelayout.model import (
    OVERLAP_EPS,
    AnchorRule,
    Dim3,
    Edge,
    EventKind,
    ObjectSpec,
    Parent,
    PlacedObject,
    RegionPlan,
    RoomPlan,
    Scene,
    SearchConfig,
    SearchMode,
    SearchTrace,
    SupportedSet,
    Yaw,
    effective_aabb,
    q4,
)
from treelayout.evaluate import validity_metrics
from treelayout.oracle.base import OracleSession, PlacementOracle
from treelayout.oracle.policy import facing_yaw_for_side, object_spans, pose_from_starts
from treelayout.oracle.queries import (
    CellsQuery,
    FullLayoutQuery,
    SideEvalQuery,
    SideQuery,
    SpatialContext,
)

PoseKey = tuple[str, int, int]

ALL_WALLS = frozenset(Side)


@lru_cache(maxsize=1)
def _vocabulary() -> tuple[str, ...]:
    return load_vocabulary()


@dataclass
class LocalThought:
    """Progressively filled decision of the three local steps."""

    side: Side | None = None
    primary_run: list[int] | None = None
    secondary_run: list[int] | None = None
    pose: tuple[float, float, Yaw] | None = None
    pose_key: PoseKey | None = None
    side_attempt: int = 1

    @property
    def complete(self) -> bool:
        return self.pose is not None


@dataclass
class GlobalState:
    """Mutable search state for one region."""

    region: RegionPlan
    order: list[ObjectSpec]
    config: SearchConfig
    session: OracleSession
    scope: str
    wall_sides: frozenset[Side]
    placed: list[PlacedObject] = field(default_factory=list)
    placed_boxes: list[tuple[float, float, float, float]] = field(default_factory=list)

    @property
    def anchor_placed(self) -> PlacedObject:
        return self.placed[0]

    @property
    def anchor_dims(self) -> Dim3:
        return self.order[0].dims

    def push(self, obj: PlacedObject, dims: Dim3) -> None:
        box = obj.aabb(dims)
        self.placed.append(obj)
        self.placed_boxes.append((box.x0, box.y0, box.x1, box.y1))

    def pop(self) -> None:
        self.placed.pop()
        self.placed_boxes.pop()


@dataclass(frozen=True)
class RegionResult:
    placements: tuple[PlacedObject, ...]
    unsat: bool
    unplaced: tuple[str, ...]
    trace: SearchTrace


def layer_order(region: RegionPlan) -> list[ObjectSpec]:
    """Anchor first, then remaining objects by descending footprint area."""
    anchor = region.spec(region.anchor_id)
    rest = [s for s in region.objects if s.id != region.anchor_id]
    rest.sort(key=lambda s: (-s.dims.footprint_area, s.id))
    return [anchor] + rest


def evaluate_thought(
    pose: tuple[float, float, Yaw],
    dims: Dim3,
    state: GlobalState,
    edge: Edge | None,
) -> tuple[bool, str]:
    """Final-step check: in bounds, overlap-free, relation satisfied."""
    cx, cy, yaw = pose
    box = effective_aabb(dims, yaw, (cx, cy))
    bounds = AABB(0.0, 0.0, state.region.length, state.region.width)
    if not bounds.contains(box):
        return False, "bounds"
    if kernels.first_overlap(box.x0, box.y0, box.x1, box.y1, state.placed_boxes, OVERLAP_EPS) != -1:
        return False, "overlap"
    if edge is not None:
        cfg = state.config
        ok = relation_satisfied(
            edge.relation, box, state.anchor_placed, state.anchor_dims,
            cfg.d_front, cfg.d_beside, cfg.d_around,
        )
        if not ok:
            return False, "relation"
    return True, "ok"


def _make_context(state: GlobalState, spec: ObjectSpec, edge: Edge | None,
                  grid: OccupancyGrid) -> SpatialContext:
    cfg = state.config
    return SpatialContext(
        scope=state.scope,
        object_id=spec.id,
        region_length=state.region.length,
        region_width=state.region.width,
        cell_size=cfg.cell_size,
        grid=grid,
        placed_boxes=tuple(state.placed_boxes),
        anchor=state.anchor_placed,
        anchor_dims=state.anchor_dims,
        object_dims=spec.dims,
        relation=edge.relation if edge else None,
        orientation_rule=edge.orientation_rule if edge else None,
        d_front=cfg.d_front,
        d_beside=cfg.d_beside,
        d_around=cfg.d_around,
    )


def _parse_side(text: str) -> Side | None:
    lowered = text.lower()
    found = [side for side in Side if side.value in lowered]
    return found[0] if len(found) == 1 else None


def _parse_yes(text: str) -> bool:
    head = text.strip().lower()
    return head.startswith("yes") or head.startswith("true")


def local_place(
    spec: ObjectSpec,
    edge: Edge | None,
    state: GlobalState,
    excluded: set[PoseKey],
    round_no: int,
    global_attempt: int,
    layer: int,
) -> tuple[LocalThought | None, str]:
    """Three-step local search; returns a complete validated thought or
    (None, failure summary).  Every completed pose candidate is logged as
    a Proposed event under the caller's global attempt."""
    cfg = state.config
    session = state.session
    grid = rasterize(state.region, state.placed, cfg.cell_size)
    ctx = _make_context(state, spec, edge, grid)
    grid_text = serialize_grid_prompt(grid, assign_emojis([], _vocabulary()), state.wall_sides)
    anchor_box = state.anchor_placed.aabb(state.anchor_dims)
    notes: list[str] = []
    tried_sides: list[Side] = []

    for side_attempt in range(1, cfg.k_local_side + 1):
        raw = session.ask(
            SideQuery(
                grid_prompt=grid_text,
                context=ctx,
                avoid=tuple(s.value for s in tried_sides),
                attempt=side_attempt,
                round_no=round_no,
            )
        )
        side = _parse_side(raw)
        if side is None or side in tried_sides:
            notes.append(f"side reply unusable: {raw[:40]!r}")
            continue
        tried_sides.append(side)
        eval_raw = session.ask(
            SideEvalQuery(
                grid_prompt=grid_text, context=ctx, side=side,
                attempt=side_attempt, round_no=round_no,
            )
        )
        if not _parse_yes(eval_raw):
            notes.append(f"{side.value}: eval no")
            continue
        thought = _search_axes(spec, edge, state, ctx, grid, side, anchor_box,
                               excluded, round_no, global_attempt, layer, notes)
        if thought is not None:
            thought.side_attempt = side_attempt
            return thought, "ok"
    return None, "; ".join(notes) if notes else "no side worked"


def _search_axes(
    spec: ObjectSpec,
    edge: Edge | None,
    state: GlobalState,
    ctx: SpatialContext,
    grid: OccupancyGrid,
    side: Side,
    anchor_box: AABB,
    excluded: set[PoseKey],
    round_no: int,
    global_attempt: int,
    layer: int,
    notes: list[str],
) -> LocalThought | None:
    cfg = state.config
    session = state.session
    trace = session.trace
    cand = candidate_cells(grid, side, anchor_box)
    if not cand:
        notes.append(f"{side.value}: no candidate cells")
        return None
    m_cols, m_rows = object_spans(ctx, side)
    primary_axis, secondary_axis = ("cols", "rows") if side.horizontal else ("rows", "cols")
    m_primary = m_cols if side.horizontal else m_rows
    m_secondary = m_rows if side.horizontal else m_cols
    axis_of_primary = grid.col_of if side.horizontal else grid.row_of
    axis_of_secondary = grid.row_of if side.horizontal else grid.col_of
    emap_primary = assign_emojis(cand, _vocabulary())
    grid_text_primary = serialize_grid_prompt(grid, emap_primary, state.wall_sides)

    tried_primary: list[int] = []
    for p_attempt in range(1, cfg.k_local_axis + 1):
        raw = session.ask(
            CellsQuery(
                grid_prompt=grid_text_primary,
                context=ctx,
                emap=emap_primary,
                expected_count=m_primary,
                axis=primary_axis,
                side=side,
                avoid=tuple(tried_primary),
                attempt=p_attempt,
                round_no=round_no,
            )
        )
        try:
            cells = parse_emoji_selection(raw, emap_primary, m_primary)
            run_p = contiguous_axis_run(grid, cells, primary_axis)
        except SelectionError as exc:
            notes.append(f"{side.value}/{primary_axis}: {type(exc).__name__}")
            continue
        p_start = run_p[0]
        if p_start in tried_primary:
            notes.append(f"{side.value}/{primary_axis}: repeat run {p_start}")
            continue
        tried_primary.append(p_start)

        sub_cells = [c for c in cand if axis_of_primary(c) in run_p]
        if not sub_cells:
            notes.append(f"{side.value}/{primary_axis}: empty run {p_start}")
            continue
        emap_secondary = assign_emojis(sub_cells, _vocabulary())
        grid_text_secondary = serialize_grid_prompt(grid, emap_secondary, state.wall_sides)
        pose_avoid = tuple(
            sorted(s for (sd, p, s) in excluded if sd == side.value and p == p_start)
        )
        tried_secondary: list[int] = []
        for s_attempt in range(1, cfg.k_local_axis + 1):
            raw2 = session.ask(
                CellsQuery(
                    grid_prompt=grid_text_secondary,
                    context=ctx,
                    emap=emap_secondary,
                    expected_count=m_secondary,
                    axis=secondary_axis,
                    side=side,
                    primary_run=(p_start,),
                    avoid=tuple(tried_secondary) + pose_avoid,
                    attempt=s_attempt,
                    round_no=round_no,
                )
            )
            try:
                cells2 = parse_emoji_selection(raw2, emap_secondary, m_secondary)
                run_s = contiguous_axis_run(grid, cells2, secondary_axis)
            except SelectionError as exc:
                notes.append(f"{side.value}/{secondary_axis}: {type(exc).__name__}")
                continue
            s_start = run_s[0]
            if s_start in tried_secondary:
                notes.append(f"{side.value}/{secondary_axis}: repeat run {s_start}")
                continue
            tried_secondary.append(s_start)
            col_start = p_start if side.horizontal else s_start
            row_start = s_start if side.horizontal else p_start
            cx, cy, yaw = pose_from_starts(ctx, side, col_start, row_start)
            key: PoseKey = (side.value, p_start, s_start)
            trace.record(
                layer, spec.id, global_attempt, EventKind.PROPOSED,
                f"scope={state.scope} visit={round_no} side={side.value} "
                f"cols={col_start}+{m_cols} rows={row_start}+{m_rows} "
                f"x={cx:.4f} y={cy:.4f} yaw={yaw.value}",
            )
            if key in excluded:
                notes.append(f"{side.value}: pose {key} already failed downstream")
                continue
            ok, reason = evaluate_thought((cx, cy, yaw), spec.dims, state, edge)
            if not ok:
                notes.append(f"{side.value}: {reason}")
                continue
            return LocalThought(
                side=side, primary_run=run_p, secondary_run=run_s,
                pose=(cx, cy, yaw), pose_key=key,
            )
    return None


# -- anchor placement ---------------------------------------------------------

AnchorKey = tuple[str, int]


def _wall_proposals(region: RegionPlan, dims: Dim3) -> list[tuple[AnchorKey, float, float, Yaw]]:
    """Flush-to-wall poses facing the interior, longest walls first."""
    walls = [
        ("bottom", region.length, Yaw.DEG_0),
        ("left", region.width, Yaw.DEG_90),
        ("top", region.length, Yaw.DEG_180),
        ("right", region.width, Yaw.DEG_270),
    ]
    order = {"bottom": 0, "left": 1, "top": 2, "right": 3}
    walls.sort(key=lambda w: (-w[1], order[w[0]]))
    out = []
    for name, _, yaw in walls:
        box = effective_aabb(dims, yaw, (0.0, 0.0))
        ex, ey = box.width, box.height
        if name == "bottom":
            center = (region.length / 2.0, ey / 2.0)
        elif name == "top":
            center = (region.length / 2.0, region.width - ey / 2.0)
        elif name == "left":
            center = (ex / 2.0, region.width / 2.0)
        else:
            center = (region.length - ex / 2.0, region.width / 2.0)
        out.append(((name, yaw.value), q4(center[0]), q4(center[1]), yaw))
    return out


def _corner_proposals(region: RegionPlan, dims: Dim3) -> list[tuple[AnchorKey, float, float, Yaw]]:
    """Flush-to-two-walls poses, facing along the axis with more free depth."""
    out = []
    for name, (sx, sy) in (
        ("bl", (1, 1)), ("br", (-1, 1)), ("tl", (1, -1)), ("tr", (-1, -1)),
    ):
        yaw_y = Yaw.DEG_0 if sy > 0 else Yaw.DEG_180
        yaw_x = Yaw.DEG_90 if sx > 0 else Yaw.DEG_270
        box_y = effective_aabb(dims, yaw_y, (0.0, 0.0))
        box_x = effective_aabb(dims, yaw_x, (0.0, 0.0))
        free_y = region.width - box_y.height
        free_x = region.length - box_x.width
        yaw = yaw_y if free_y >= free_x else yaw_x
        box = effective_aabb(dims, yaw, (0.0, 0.0))
        cx = box.width / 2.0 if sx > 0 else region.length - box.width / 2.0
        cy = box.height / 2.0 if sy > 0 else region.width - box.height / 2.0
        out.append(((name, yaw.value), q4(cx), q4(cy), yaw))
    return out


def place_anchor_visit(
    state: GlobalState,
    rule: AnchorRule,
    visit_no: int,
    used: set[AnchorKey],
) -> tuple[PlacedObject, AnchorKey] | None:
    """One visit of the anchor layer: up to the anchor budget of novel
    proposals, each validated against the region bounds."""
    region = state.region
    cfg = state.config
    spec = state.order[0]
    trace = state.session.trace
    bounds = AABB(0.0, 0.0, region.length, region.width)

    def attempt_pose(key: AnchorKey, cx: float, cy: float, yaw: Yaw, attempt: int):
        box = effective_aabb(spec.dims, yaw, (cx, cy))
        trace.record(
            1, spec.id, attempt, EventKind.PROPOSED,
            f"scope={state.scope} visit={visit_no} anchor={key[0]} "
            f"x={cx:.4f} y={cy:.4f} yaw={yaw.value}",
        )
        if bounds.contains(box):
            placed = PlacedObject(spec.id, cx, cy, 0.0, yaw, Parent.floor(region.id))
            trace.record(
                1, spec.id, attempt, EventKind.ACCEPTED,
                f"scope={state.scope} visit={visit_no} anchor={key[0]} "
                f"x={cx:.4f} y={cy:.4f} yaw={yaw.value}",
            )
            return placed
        trace.record(
            1, spec.id, attempt, EventKind.REJECTED,
            f"scope={state.scope} visit={visit_no} anchor does not fit on {key[0]}",
        )
        return None

    if rule in (AnchorRule.ALONG_WALL, AnchorRule.AT_CORNER):
        proposals = (
            _wall_proposals(region, spec.dims)
            if rule is AnchorRule.ALONG_WALL
            else _corner_proposals(region, spec.dims)
        )
        attempt = 0
        for key, cx, cy, yaw in proposals:
            if key in used:
                continue
            attempt += 1
            if attempt > cfg.k_global_anchor:
                break
            placed = attempt_pose(key, cx, cy, yaw, attempt)
            if placed is not None:
                return placed, key
        return None

    # place_in_center: centered on the region centroid, facing chosen by
    # the oracle among the four directions (toward the most free space).
    cx, cy = q4(region.length / 2.0), q4(region.width / 2.0)
    grid = rasterize(region, [], cfg.cell_size)
    probe = PlacedObject(spec.id, cx, cy, 0.0, Yaw.DEG_0, Parent.floor(region.id))
    ctx = SpatialContext(
        scope=state.scope,
        object_id=spec.id,
        region_length=region.length,
        region_width=region.width,
        cell_size=cfg.cell_size,
        grid=grid,
        placed_boxes=(),
        anchor=probe,
        anchor_dims=spec.dims,
        object_dims=spec.dims,
        relation=None,
        orientation_rule=None,
        d_front=cfg.d_front,
        d_beside=cfg.d_beside,
        d_around=cfg.d_around,
    )
    grid_text = serialize_grid_prompt(grid, assign_emojis([], _vocabulary()), state.wall_sides)
    tried: list[str] = [name for (name, _) in used]
    for attempt in range(1, cfg.k_global_anchor + 1):
        raw = state.session.ask(
            SideQuery(
                grid_prompt=grid_text, context=ctx, avoid=tuple(tried),
                attempt=attempt, round_no=visit_no,
            )
        )
        side = _parse_side(raw)
        if side is None or side.value in tried:
            trace.record(
                1, spec.id, attempt, EventKind.REJECTED,
                f"scope={state.scope} visit={visit_no} facing reply unusable",
            )
            continue
        tried.append(side.value)
        yaw = facing_yaw_for_side(side)
        key: AnchorKey = (side.value, yaw.value)
        placed = attempt_pose(key, cx, cy, yaw, attempt)
        if placed is not None:
            return placed, key
    return None


# -- region planning -----------------------------------------------------------


def plan_region(
    region: RegionPlan,
    config: SearchConfig,
    oracle: PlacementOracle,
    trace: SearchTrace | None = None,
    wall_sides: frozenset[Side] = ALL_WALLS,
    scope: str | None = None,
) -> RegionResult:
    """Place every floor object of one region, or report Unsat.

    In tree mode the result is all-or-nothing; in CoT mode unplaceable
    objects are skipped and reported in ``unplaced``.
    """
    if config.mode is SearchMode.IO:
        raise ValueError("plan_region requires tree or cot mode")
    trace = trace if trace is not None else SearchTrace()
    session = OracleSession(oracle, trace)
    state = GlobalState(
        region=region,
        order=layer_order(region),
        config=config,
        session=session,
        scope=scope if scope is not None else region.id,
        wall_sides=wall_sides,
    )
    if config.mode is SearchMode.COT:
        return _plan_region_cot(state)
    return _plan_region_tree(state)


def _plan_region_tree(state: GlobalState) -> RegionResult:
    region = state.region
    cfg = state.config
    trace = state.session.trace
    anchor_spec = state.order[0]
    used: set[AnchorKey] = set()
    for visit in range(1, cfg.k_global_anchor + 1):
        result = place_anchor_visit(state, region.anchor_rule, visit, used)
        if result is None:
            trace.record(
                1, anchor_spec.id, 0, EventKind.BACKTRACK,
                f"scope={state.scope} visit={visit} root budget exhausted (no anchor pose)",
            )
            return RegionResult((), True, tuple(s.id for s in state.order), trace)
        placed, key = result
        state.push(placed, anchor_spec.dims)
        if _solve_from(state, 1):
            return RegionResult(tuple(state.placed), False, (), trace)
        state.pop()
        used.add(key)
        trace.record(
            1, anchor_spec.id, 0, EventKind.BACKTRACK,
            f"scope={state.scope} visit={visit} from_layer=2",
        )
    return RegionResult((), True, tuple(s.id for s in state.order), trace)


def _solve_from(state: GlobalState, i: int) -> bool:
    if i >= len(state.order):
        return True
    spec = state.order[i]
    layer = i + 1
    edge = state.region.edge_for(spec.id)
    cfg = state.config
    trace = state.session.trace
    excluded: set[PoseKey] = set()
    round_no = 0
    while True:
        round_no += 1
        thought: LocalThought | None = None
        used_attempt = 0
        for attempt in range(1, cfg.k_global_other + 1):
            t, notes = local_place(spec, edge, state, excluded, round_no, attempt, layer)
            if t is None:
                trace.record(
                    layer, spec.id, attempt, EventKind.REJECTED,
                    f"scope={state.scope} visit={round_no} {notes}",
                )
                continue
            thought, used_attempt = t, attempt
            break
        if thought is None:
            return False
        cx, cy, yaw = thought.pose
        placed = PlacedObject(spec.id, cx, cy, 0.0, yaw, Parent.floor(state.region.id))
        trace.record(
            layer, spec.id, used_attempt, EventKind.ACCEPTED,
            f"scope={state.scope} visit={round_no} side={thought.side.value} "
            f"side_attempt={thought.side_attempt} x={cx:.4f} y={cy:.4f} yaw={yaw.value}",
        )
        state.push(placed, spec.dims)
        if _solve_from(state, i + 1):
            return True
        state.pop()
        excluded.add(thought.pose_key)
        trace.record(
            layer, spec.id, 0, EventKind.BACKTRACK,
            f"scope={state.scope} visit={round_no} from_layer={layer + 1}",
        )


def _plan_region_cot(state: GlobalState) -> RegionResult:
    region = state.region
    trace = state.session.trace
    anchor_spec = state.order[0]
    result = place_anchor_visit(state, region.anchor_rule, 1, set())
    if result is None:
        trace.record(
            1, anchor_spec.id, 0, EventKind.BACKTRACK,
            f"scope={state.scope} visit=1 root budget exhausted (no anchor pose)",
        )
        return RegionResult((), True, tuple(s.id for s in state.order), trace)
    placed, _ = result
    state.push(placed, anchor_spec.dims)
    unplaced: list[str] = []
    for i in range(1, len(state.order)):
        spec = state.order[i]
        layer = i + 1
        edge = region.edge_for(spec.id)
        t, notes = local_place(spec, edge, state, set(), 1, 1, layer)
        if t is None:
            trace.record(
                layer, spec.id, 1, EventKind.REJECTED,
                f"scope={state.scope} visit=1 skipped: {notes}",
            )
            unplaced.append(spec.id)
            continue
        cx, cy, yaw = t.pose
        obj = PlacedObject(spec.id, cx, cy, 0.0, yaw, Parent.floor(region.id))
        trace.record(
            layer, spec.id, 1, EventKind.ACCEPTED,
            f"scope={state.scope} visit=1 side={t.side.value} "
            f"side_attempt={t.side_attempt} x={cx:.4f} y={cy:.4f} yaw={yaw.value}",
        )
        state.push(obj, spec.dims)
    return RegionResult(tuple(state.placed), False, tuple(unplaced), trace)


# -- supported objects ----------------------------------------------------------


def place_supported(
    supporter: PlacedObject,
    supporter_spec: ObjectSpec,
    sub: SupportedSet,
    config: SearchConfig,
    oracle: PlacementOracle,
    trace: SearchTrace,
) -> list[PlacedObject]:
    """Solve the supporter's top face as a miniature region.

    Placements come back supporter-local (origin at the top face's
    bottom-left at yaw 0) with z already set to the supporter height.
    An Unsat sub-problem drops the supported objects with a trace note
    and never fails the parent search.
    """
    if not sub.objects:
        return []
    local_anchor = max(sub.objects, key=lambda s: (s.dims.footprint_area, s.id))
    mini = RegionPlan(
        id=f"top:{supporter.spec_id}",
        function="top surface",
        length=supporter_spec.dims.length,
        width=supporter_spec.dims.depth,
        objects=sub.objects,
        anchor_id=local_anchor.id,
        anchor_rule=AnchorRule.IN_CENTER,
        edges=sub.edges,
    )
    mini_config = replace(config, cell_size=config.cell_size / 5.0)
    result = plan_region(mini, mini_config, oracle, trace=trace, scope=mini.id)
    if result.unsat:
        trace.record(
            0, supporter.spec_id, 0, EventKind.REJECTED,
            f"scope={mini.id} supported set dropped (unsat)",
        )
        return []
    for dropped in result.unplaced:
        trace.record(
            0, dropped, 0, EventKind.REJECTED,
            f"scope={mini.id} supported object skipped",
        )
    return [
        PlacedObject(
            p.spec_id, p.x, p.y, supporter_spec.dims.height, p.yaw,
            Parent.supporter(supporter.spec_id),
        )
        for p in result.placements
    ]


# -- IO mode ---------------------------------------------------------------------

_IO_LINE_RE = re.compile(
    r"^\s*([a-z0-9_]+)\s*:\s*x\s*=\s*(-?[0-9.]+)\s+y\s*=\s*(-?[0-9.]+)"
    r"\s+z\s*=\s*(-?[0-9.]+)\s+yaw\s*=\s*(\d+)\s*$",
    re.IGNORECASE,
)


def plan_io_text(plan: RoomPlan) -> str:
    lines = [f"room: {plan.room_type} {plan.length:g} x {plan.width:g}"]
    for region in plan.regions:
        lines.append(f"region {region.id}: {region.function} {region.length:g} x {region.width:g}")
        for spec in region.objects:
            role = "anchor" if spec.id == region.anchor_id else "object"
            d = spec.dims
            lines.append(f"  {spec.id}: {spec.category} {d.length:g} x {d.depth:g} x {d.height:g} ({role})")
    return "\n".join(lines)


def run_io_mode(
    plan: RoomPlan,
    oracle: PlacementOracle,
    config: SearchConfig,
    trace: SearchTrace | None = None,
) -> Scene:
    """Single-shot layout: one oracle call, validated but never repaired."""
    trace = trace if trace is not None else SearchTrace()
    session = OracleSession(oracle, trace)
    raw = session.ask(FullLayoutQuery(plan=plan, plan_text=plan_io_text(plan)))
    region_of = {s.id: r.id for r in plan.regions for s in r.objects}
    placements: list[PlacedObject] = []
    parsed_any = False
    for line in raw.splitlines():
        m = _IO_LINE_RE.match(line)
        if not m:
            continue
        parsed_any = True
        oid = m.group(1).lower()
        if oid not in region_of:
            trace.record(0, oid, 0, EventKind.REJECTED, "scope=io unknown object id")
            continue
        try:
            yaw = Yaw.of(int(m.group(5)))
        except ValueError:
            trace.record(0, oid, 0, EventKind.REJECTED, "scope=io bad yaw")
            continue
        placements.append(
            PlacedObject(
                oid, float(m.group(2)), float(m.group(3)), float(m.group(4)),
                yaw, Parent.floor(region_of[oid]),
            )
        )
    if not parsed_any:
        trace.record(0, "io", 0, EventKind.REJECTED, "scope=io parse failure: no placements")
    scene = Scene(plan=plan, placements=tuple(placements), trace=trace)
    # validated, never repaired: violations go on the record
    m = validity_metrics(scene, config)
    if m.overlap_pairs or m.oob_objects or m.relation_violations:
        trace.record(
            0, "io", 0, EventKind.REJECTED,
            f"scope=io violations overlap={m.overlap_pairs} oob={m.oob_objects} "
            f"relation={m.relation_violations}",
        )
    return scene
