"""Geometric validity metrics and search statistics.

These stand in for perceptual scoring: a sound engine must produce
zero overlap, zero out-of-bounds, and zero relation violations in
tree and CoT modes, and the ablation report compares modes on exactly
those grounds plus the placed-object ratio.
"""

from __future__ import annotations

import re
import statistics
from dataclasses import dataclass

from treelayout.grid import relation_satisfied
from treelayout.model import (
    OVERLAP_EPS,
    AABB,
    EventKind,
    Scene,
    SearchConfig,
    SearchTrace,
)


@dataclass(frozen=True)
class ValidityMetrics:
    overlap_pairs: int
    oob_objects: int
    relation_violations: int
    placed_ratio: float
    free_area_ratio: float

    def clean(self) -> bool:
        return self.overlap_pairs == 0 and self.oob_objects == 0 and self.relation_violations == 0


def validity_metrics(scene: Scene, config: SearchConfig | None = None) -> ValidityMetrics:
    """Count geometric violations of a composed scene.

    Overlaps are counted between objects at the same support level
    (floor vs floor, or siblings on the same supporter).  Out-of-bounds
    means a floor footprint escaping the room or a supported footprint
    escaping its supporter top face (or sitting at the wrong height).
    """
    cfg = config if config is not None else SearchConfig()
    specs = scene.spec_index()
    room = AABB(0.0, 0.0, scene.plan.length, scene.plan.width)
    by_id = {p.spec_id: p for p in scene.placements}

    boxes = {p.spec_id: p.aabb(specs[p.spec_id].dims) for p in scene.placements}
    overlap_pairs = 0
    placements = list(scene.placements)
    for i, a in enumerate(placements):
        for b in placements[i + 1:]:
            if a.parent != b.parent:
                continue
            if boxes[a.spec_id].overlaps(boxes[b.spec_id], OVERLAP_EPS):
                overlap_pairs += 1

    oob = 0
    for p in placements:
        if p.parent.kind == "floor":
            if not room.contains(boxes[p.spec_id]) or p.z != 0.0:
                oob += 1
        else:
            sup = by_id.get(p.parent.ref)
            if sup is None:
                oob += 1
                continue
            sup_box = sup.aabb(specs[p.parent.ref].dims)
            if not sup_box.contains(boxes[p.spec_id], eps=1e-6):
                oob += 1
            elif abs(p.z - specs[p.parent.ref].dims.height) > 1e-6:
                oob += 1

    relation_violations = 0
    for region in scene.plan.regions:
        anchor = by_id.get(region.anchor_id)
        for edge in region.edges:
            p = by_id.get(edge.object_id)
            if p is None or anchor is None:
                continue
            ok = relation_satisfied(
                edge.relation,
                boxes[p.spec_id],
                anchor,
                specs[region.anchor_id].dims,
                cfg.d_front,
                cfg.d_beside,
                cfg.d_around,
            )
            if not ok:
                relation_violations += 1
        for _sup_id, sub in region.supported.items():
            local_anchor = max(
                sub.objects, key=lambda s: (s.dims.footprint_area, s.id), default=None
            )
            if local_anchor is None:
                continue
            anchor_p = by_id.get(local_anchor.id)
            for edge in sub.edges:
                p = by_id.get(edge.object_id)
                if p is None or anchor_p is None:
                    continue
                ok = relation_satisfied(
                    edge.relation, boxes[p.spec_id], anchor_p, local_anchor.dims,
                    cfg.d_front, cfg.d_beside, cfg.d_around,
                )
                if not ok:
                    relation_violations += 1

    total_specs = len(scene.plan.all_specs())
    placed_ratio = len(placements) / total_specs if total_specs else 1.0
    floor_area = sum(
        specs[p.spec_id].dims.footprint_area for p in placements if p.parent.kind == "floor"
    )
    room_area = scene.plan.length * scene.plan.width
    free_area_ratio = 1.0 - floor_area / room_area if room_area else 0.0
    return ValidityMetrics(
        overlap_pairs=overlap_pairs,
        oob_objects=oob,
        relation_violations=relation_violations,
        placed_ratio=placed_ratio,
        free_area_ratio=free_area_ratio,
    )


_VISIT_RE = re.compile(r"\bvisit=(\d+)")
_SCOPE_RE = re.compile(r"\bscope=(\S+)")


@dataclass(frozen=True)
class SearchStats:
    oracle_calls: int
    backtracks: int
    attempts_per_layer: dict[tuple[str, int], int]
    wall_events: int

    def max_attempts(self, layer: int) -> int:
        values = [v for (scope, l), v in self.attempts_per_layer.items() if l == layer]
        return max(values, default=0)


def search_stats(trace: SearchTrace) -> SearchStats:
    """Aggregate a trace: per (scope, layer, visit) attempt maxima are
    collapsed to the per-(scope, layer) maximum over visits."""
    attempts: dict[tuple[str, int, int], int] = {}
    for e in trace.events:
        m_scope = _SCOPE_RE.search(e.detail)
        m_visit = _VISIT_RE.search(e.detail)
        if not (m_scope and m_visit) or e.layer < 1:
            continue
        key = (m_scope.group(1), e.layer, int(m_visit.group(1)))
        attempts[key] = max(attempts.get(key, 0), e.attempt_no)
    per_layer: dict[tuple[str, int], int] = {}
    for (scope, layer, _visit), n in attempts.items():
        per_layer[(scope, layer)] = max(per_layer.get((scope, layer), 0), n)
    return SearchStats(
        oracle_calls=trace.oracle_calls,
        backtracks=trace.count(EventKind.BACKTRACK),
        attempts_per_layer=per_layer,
        wall_events=len(trace.events),
    )


def anchor_visits(trace: SearchTrace, scope: str) -> int:
    """Number of anchor-layer visits in one scope: distinct visit ordinals
    on layer-1 attempt events (backtracks mark the end of a visit)."""
    seen: set[int] = set()
    for e in trace.events:
        if e.layer != 1 or e.kind is EventKind.BACKTRACK:
            continue
        if f"scope={scope}" not in e.detail:
            continue
        m = _VISIT_RE.search(e.detail)
        if m:
            seen.add(int(m.group(1)))
    return len(seen)


class MismatchedSeeds(ValueError):
    pass


@dataclass(frozen=True)
class AblationRow:
    mode: str
    runs: int
    placed_ratio_mean: float
    placed_ratio_std: float
    overlap_mean: float
    oob_mean: float
    relation_mean: float
    free_area_mean: float


def ablation_report(
    scenes_per_mode: dict[str, list[tuple[int, Scene]]],
    config: SearchConfig | None = None,
    required_modes: tuple[str, ...] = ("io", "cot", "tree"),
) -> list[AblationRow]:
    """Mode-by-mode means over identical seed sets, rows ordered IO, CoT, Tree."""
    expected = tuple(m for m in ("io", "cot", "tree") if m in required_modes)
    for mode in expected:
        if mode not in scenes_per_mode:
            raise MismatchedSeeds(f"missing mode {mode}")
    seed_sets = {mode: sorted(seed for seed, _ in rows) for mode, rows in scenes_per_mode.items()}
    baseline = seed_sets[expected[0]]
    for mode, seeds in seed_sets.items():
        if seeds != baseline:
            raise MismatchedSeeds(f"seed set of {mode} differs from {expected[0]}")
    out: list[AblationRow] = []
    for mode in expected:
        metrics = [validity_metrics(scene, config) for _, scene in scenes_per_mode[mode]]
        ratios = [m.placed_ratio for m in metrics]
        out.append(
            AblationRow(
                mode=mode,
                runs=len(metrics),
                placed_ratio_mean=statistics.fmean(ratios),
                placed_ratio_std=statistics.pstdev(ratios) if len(ratios) > 1 else 0.0,
                overlap_mean=statistics.fmean(m.overlap_pairs for m in metrics),
                oob_mean=statistics.fmean(m.oob_objects for m in metrics),
                relation_mean=statistics.fmean(m.relation_violations for m in metrics),
                free_area_mean=statistics.fmean(m.free_area_ratio for m in metrics),
            )
        )
    return out


def format_ablation_table(rows: list[AblationRow]) -> tuple[str, str]:
    """(csv, human-readable) renderings of an ablation report."""
    header = "mode,runs,placed_ratio_mean,placed_ratio_std,overlap_mean,oob_mean,relation_mean,free_area_mean"
    csv_lines = [header]
    for r in rows:
        csv_lines.append(
            f"{r.mode},{r.runs},{r.placed_ratio_mean:.4f},{r.placed_ratio_std:.4f},"
            f"{r.overlap_mean:.4f},{r.oob_mean:.4f},{r.relation_mean:.4f},{r.free_area_mean:.4f}"
        )
    text_lines = [
        f"{'mode':<6} {'runs':>4} {'placed':>14} {'overlap':>8} {'oob':>6} {'relation':>9} {'free':>6}"
    ]
    for r in rows:
        text_lines.append(
            f"{r.mode:<6} {r.runs:>4} {r.placed_ratio_mean:>7.3f}±{r.placed_ratio_std:<6.3f}"
            f" {r.overlap_mean:>8.3f} {r.oob_mean:>6.3f} {r.relation_mean:>9.3f}"
            f" {r.free_area_mean:>6.3f}"
        )
    return "\n".join(csv_lines) + "\n", "\n".join(text_lines) + "\n"
