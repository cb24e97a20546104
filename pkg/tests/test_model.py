import math

import pytest
from hypothesis import given, strategies as st

from treelayout.model import (
    AABB,
    AnchorRule,
    Dim3,
    Edge,
    ObjectSpec,
    OrientationRule,
    RegionPlan,
    RoomPlan,
    SearchConfig,
    SearchMode,
    SpatialRelation,
    Yaw,
    effective_aabb,
    validate_room_plan,
)


def make_region(region_id="r1", length=3.0, width=4.0, categories=("bed", "nightstand")):
    objects = tuple(
        ObjectSpec(id=f"{c}_{i}", category=c, dims=Dim3(1.0, 0.5, 0.5))
        for i, c in enumerate(categories, 1)
    )
    edges = tuple(
        Edge(o.id, SpatialRelation.PLACE_BESIDE, OrientationRule.SAME_AS_ANCHOR)
        for o in objects[1:]
    )
    return RegionPlan(
        id=region_id,
        function="rest region",
        length=length,
        width=width,
        objects=objects,
        anchor_id=objects[0].id,
        anchor_rule=AnchorRule.ALONG_WALL,
        edges=edges,
    )


class TestDim3:
    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            Dim3(0.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            Dim3(1.0, -2.0, 1.0)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            Dim3(math.inf, 1.0, 1.0)
        with pytest.raises(ValueError):
            Dim3(1.0, math.nan, 1.0)


class TestEffectiveAabb:
    def test_yaw_0(self):
        box = effective_aabb(Dim3(2, 1, 1), Yaw.DEG_0, (0.0, 0.0))
        assert (box.x0, box.y0, box.x1, box.y1) == (-1.0, -0.5, 1.0, 0.5)

    def test_yaw_90_swaps_extents(self):
        box = effective_aabb(Dim3(2, 1, 1), Yaw.DEG_90, (0.0, 0.0))
        assert (box.x0, box.y0, box.x1, box.y1) == (-0.5, -1.0, 0.5, 1.0)

    def test_yaw_180_preserves_aabb(self):
        box = effective_aabb(Dim3(2, 1, 1), Yaw.DEG_180, (3.0, 2.0))
        assert (box.x0, box.y0, box.x1, box.y1) == (2.0, 1.5, 4.0, 2.5)

    @given(
        st.floats(0.1, 5.0), st.floats(0.1, 5.0),
        st.floats(-10, 10), st.floats(-10, 10),
        st.sampled_from(list(Yaw)),
    )
    def test_opposite_yaw_same_rect(self, length, depth, cx, cy, yaw):
        dims = Dim3(length, depth, 1.0)
        a = effective_aabb(dims, yaw, (cx, cy))
        b = effective_aabb(dims, yaw.opposite, (cx, cy))
        assert a == b

    @given(st.floats(0.1, 5.0), st.floats(0.1, 5.0), st.sampled_from(list(Yaw)))
    def test_area_invariant(self, length, depth, yaw):
        dims = Dim3(length, depth, 1.0)
        box = effective_aabb(dims, yaw, (0.0, 0.0))
        assert box.area == pytest.approx(dims.length * dims.depth, rel=1e-9)


class TestAabb:
    def test_shared_edge_does_not_overlap(self):
        a = AABB(0, 0, 1, 1)
        b = AABB(1, 0, 2, 1)
        assert not a.overlaps(b)
        assert a.gap_to(b) == 0.0

    def test_gap(self):
        a = AABB(0, 0, 1, 1)
        b = AABB(2, 0, 3, 1)
        assert a.gap_to(b) == pytest.approx(1.0)
        c = AABB(2, 2, 3, 3)
        assert a.gap_to(c) == pytest.approx(math.sqrt(2))


class TestValidateRoomPlan:
    def test_valid_plan_empty_report(self):
        plan = RoomPlan(
            room_type="bedroom", length=5.0, width=4.0,
            regions=(make_region("r1", 3.0, 4.0, ("bed", "nightstand")),
                     make_region("r2", 2.0, 4.0, ("desk", "office_chair"))),
            prompt="p",
        )
        assert validate_room_plan(plan) == []

    def test_length_mismatch_reported(self):
        plan = RoomPlan(
            room_type="bedroom", length=5.0, width=4.0,
            regions=(make_region("r1", 3.0, 4.0, ("bed",)),
                     make_region("r2", 3.0, 4.0, ("desk",))),
            prompt="p",
        )
        report = validate_room_plan(plan)
        assert any("sum" in v for v in report)

    def test_duplicate_edge_reported(self):
        region = make_region()
        doubled = RegionPlan(
            id=region.id, function=region.function, length=region.length,
            width=region.width, objects=region.objects, anchor_id=region.anchor_id,
            anchor_rule=region.anchor_rule, edges=region.edges + region.edges,
        )
        plan = RoomPlan("bedroom", doubled.length, doubled.width, (doubled,), "p")
        assert any("duplicate edge" in v for v in validate_room_plan(plan))

    def test_width_mismatch_reported(self):
        plan = RoomPlan(
            room_type="bedroom", length=3.0, width=4.5,
            regions=(make_region("r1", 3.0, 4.0),), prompt="p",
        )
        assert any("width" in v for v in validate_room_plan(plan))

    def test_pure(self):
        plan = RoomPlan("bedroom", 3.0, 4.0, (make_region(),), "p")
        assert validate_room_plan(plan) == validate_room_plan(plan)


class TestSearchConfig:
    def test_cot_forces_k_to_one(self):
        cfg = SearchConfig(k_global_anchor=3, k_local_side=2, mode=SearchMode.COT)
        assert cfg.k_global_anchor == 1
        assert cfg.k_global_other == 1
        assert cfg.k_local_side == 1
        assert cfg.k_local_axis == 1

    def test_rejects_bad_budgets(self):
        with pytest.raises(ValueError):
            SearchConfig(k_global_anchor=0)
        with pytest.raises(ValueError):
            SearchConfig(cell_size=0.0)
        with pytest.raises(ValueError):
            SearchConfig(p_adv=1.5)


class TestValidatePlanMore:
    def test_anchor_with_edge_reported(self):
        region = make_region()
        bad = RegionPlan(
            id=region.id, function=region.function, length=region.length,
            width=region.width, objects=region.objects, anchor_id=region.anchor_id,
            anchor_rule=region.anchor_rule,
            edges=region.edges + (Edge(region.anchor_id, SpatialRelation.PLACE_BESIDE,
                                       OrientationRule.SAME_AS_ANCHOR),),
        )
        plan = RoomPlan("bedroom", bad.length, bad.width, (bad,), "p")
        assert any("must not carry an edge" in v for v in validate_room_plan(plan))

    def test_missing_edge_reported(self):
        region = make_region()
        bad = RegionPlan(
            id=region.id, function=region.function, length=region.length,
            width=region.width, objects=region.objects, anchor_id=region.anchor_id,
            anchor_rule=region.anchor_rule, edges=(),
        )
        plan = RoomPlan("bedroom", bad.length, bad.width, (bad,), "p")
        assert any("has no edge" in v for v in validate_room_plan(plan))
