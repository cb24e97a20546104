"""End-to-end generation: hierarchy build, per-region search, composition."""

from __future__ import annotations

from treelayout.catalog import AssetCatalog
from treelayout.compose import attach_supported, compose
from treelayout.grid import Side
from treelayout.hierarchy import build_room_plan
from treelayout.model import (
    EventKind,
    PlacedObject,
    RoomPlan,
    Scene,
    SearchConfig,
    SearchMode,
    SearchTrace,
)
from treelayout.oracle.base import OracleSession, PlacementOracle
from treelayout.search import place_supported, plan_region, run_io_mode


def region_wall_sides(plan: RoomPlan, index: int) -> frozenset[Side]:
    """Which sides of a region are room walls: top/bottom always, left only
    for the first region, right only for the last (regions tile along x)."""
    sides = {Side.TOP, Side.BOTTOM}
    if index == 0:
        sides.add(Side.LEFT)
    if index == len(plan.regions) - 1:
        sides.add(Side.RIGHT)
    return frozenset(sides)


def solve_plan(plan: RoomPlan, config: SearchConfig, oracle: PlacementOracle,
               trace: SearchTrace) -> Scene:
    """Run the configured mode over an already-built plan."""
    if config.mode is SearchMode.IO:
        return run_io_mode(plan, oracle, config, trace=trace)
    region_solutions: dict[str, list[PlacedObject]] = {}
    unsat: list[str] = []
    supported_map: dict[str, list[PlacedObject]] = {}
    for i, region in enumerate(plan.regions):
        result = plan_region(
            region, config, oracle, trace=trace, wall_sides=region_wall_sides(plan, i)
        )
        if result.unsat:
            unsat.append(region.id)
            continue
        region_solutions[region.id] = list(result.placements)
        placed_ids = {p.spec_id for p in result.placements}
        for sup_id, sub in sorted(region.supported.items()):
            if sup_id not in placed_ids:
                trace.record(
                    0, sup_id, 0, EventKind.REJECTED,
                    f"scope={region.id} supporter unplaced, supported set dropped",
                )
                continue
            supporter_placed = next(p for p in result.placements if p.spec_id == sup_id)
            locals_ = place_supported(
                supporter_placed, region.spec(sup_id), sub, config, oracle, trace
            )
            if locals_:
                supported_map[sup_id] = locals_
    scene = compose(plan, region_solutions, trace, tuple(unsat))
    return attach_supported(scene, supported_map)


def generate_scene(
    prompt: str,
    config: SearchConfig,
    oracle: PlacementOracle,
    catalog: AssetCatalog | None = None,
) -> Scene:
    """Build the hierarchical plan from the prompt, then solve it."""
    catalog = catalog if catalog is not None else AssetCatalog.default()
    trace = SearchTrace()
    session = OracleSession(oracle, trace)
    plan = build_room_plan(prompt, session, catalog, trace)
    return solve_plan(plan, config, oracle, trace)


def scene_is_complete(scene: Scene) -> bool:
    """True when every planned object (floor and supported) got placed."""
    placed = {p.spec_id for p in scene.placements}
    return all(s.id in placed for s in scene.plan.all_specs())
