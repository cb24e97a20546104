"""Rendering of oracle queries into chat messages from the template files.

Templates are data, not code: one file per query kind under
``treelayout/data/prompt_templates``, plus a VERSION file that is mixed
into every query fingerprint.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from treelayout.oracle.queries import (
    CellsQuery,
    FullLayoutQuery,
    ObjectsQuery,
    OracleQuery,
    RegionQuery,
    RoomQuery,
    SideEvalQuery,
    SideQuery,
    SupportedQuery,
)


class MissingTemplate(Exception):
    pass


@lru_cache(maxsize=None)
def _read(name: str) -> str:
    ref = resources.files("treelayout.data.prompt_templates").joinpath(name)
    try:
        return ref.read_text("utf-8")
    except FileNotFoundError:
        raise MissingTemplate(name) from None


@lru_cache(maxsize=1)
def template_version() -> str:
    return _read("VERSION").strip()


def _dims_text(q) -> str:
    d = q.context.object_dims
    return f"{d.length:g} x {d.depth:g}"


def render_prompt_templates(q: OracleQuery) -> list[dict[str, str]]:
    """Build the (system, user) message pair for a query."""
    system = _read("system.txt").strip()
    if isinstance(q, RoomQuery):
        user = _read("room.txt").format(prompt=q.prompt)
    elif isinstance(q, RegionQuery):
        user = _read("regions.txt").format(
            room_type=q.room_type, length=f"{q.length:g}", width=f"{q.width:g}", prompt=q.prompt
        )
    elif isinstance(q, ObjectsQuery):
        user = _read("objects.txt").format(
            function=q.function,
            length=f"{q.length:g}",
            width=f"{q.width:g}",
            room_type=q.room_type,
            prompt=q.prompt,
        )
    elif isinstance(q, SupportedQuery):
        user = _read("supported.txt").format(
            category=q.category,
            top_length=f"{q.top_length:g}",
            top_depth=f"{q.top_depth:g}",
        )
    elif isinstance(q, SideQuery):
        if q.context.relation is not None:
            relation_clause = f"with relation {q.context.relation.value} to the anchor"
        else:
            relation_clause = "as the anchor; pick the side it should face (the free space)"
        avoid_clause = ""
        if q.avoid:
            avoid_clause = " Do not answer: " + ", ".join(sorted(q.avoid)) + "."
        user = _read("side.txt").format(
            grid=q.grid_prompt,
            object_id=q.context.object_id,
            dims=_dims_text(q),
            relation_clause=relation_clause,
            avoid_clause=avoid_clause,
        )
    elif isinstance(q, SideEvalQuery):
        user = _read("side_eval.txt").format(
            grid=q.grid_prompt,
            side=q.side.value,
            object_id=q.context.object_id,
            dims=_dims_text(q),
        )
    elif isinstance(q, CellsQuery):
        axis_word = "columns" if q.axis == "cols" else "rows"
        axis_unit = "column" if q.axis == "cols" else "row"
        avoid_clause = ""
        if q.avoid:
            avoid_clause = (
                f" Do not start the run at {axis_unit} index "
                + ", ".join(str(i) for i in sorted(q.avoid))
                + " (already rejected)."
            )
        user = _read("cells.txt").format(
            grid=q.grid_prompt,
            object_id=q.context.object_id,
            count=q.expected_count,
            axis_word=axis_word,
            axis_unit=axis_unit,
            side=q.side.value,
            avoid_clause=avoid_clause,
        )
    elif isinstance(q, FullLayoutQuery):
        user = _read("full_layout.txt").format(plan_text=q.plan_text)
    else:
        raise MissingTemplate(type(q).__name__)
    return [{"role": "system", "content": system}, {"role": "user", "content": user}]
