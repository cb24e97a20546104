"""Local asset catalog: category -> default dimensions and dimension ranges.

Stands in for 3D-asset retrieval: instead of looking up meshes, object
categories resolve to a shipped table of typical furniture dimensions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from treelayout.model import Dim3, ObjectSpec, q4


class UnknownCategory(KeyError):
    def __init__(self, category: str):
        super().__init__(category)
        self.category = category

    def __str__(self) -> str:
        return f"category not in asset catalog: {self.category!r}"


@dataclass(frozen=True)
class CatalogEntry:
    category: str
    dims: Dim3
    min_dims: Dim3
    max_dims: Dim3
    supportable: bool

    def __post_init__(self) -> None:
        for axis in ("length", "depth", "height"):
            lo = getattr(self.min_dims, axis)
            hi = getattr(self.max_dims, axis)
            v = getattr(self.dims, axis)
            if not lo <= v <= hi:
                raise ValueError(f"{self.category}: default {axis} {v} outside range [{lo}, {hi}]")

    def clamp(self, dims: Dim3) -> Dim3:
        def cl(v: float, lo: float, hi: float) -> float:
            return q4(min(max(v, lo), hi))

        return Dim3(
            cl(dims.length, self.min_dims.length, self.max_dims.length),
            cl(dims.depth, self.min_dims.depth, self.max_dims.depth),
            cl(dims.height, self.min_dims.height, self.max_dims.height),
        )


class AssetCatalog:
    """Immutable category table loaded from a JSON data file."""

    def __init__(self, entries: dict[str, CatalogEntry]):
        self._entries = dict(entries)

    def __contains__(self, category: str) -> bool:
        return category in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def categories(self) -> list[str]:
        return sorted(self._entries)

    def entry(self, category: str) -> CatalogEntry:
        try:
            return self._entries[category]
        except KeyError:
            raise UnknownCategory(category) from None

    @classmethod
    def from_file(cls, path: str | Path) -> "AssetCatalog":
        return cls._parse(json.loads(Path(path).read_text("utf-8")))

    @classmethod
    def default(cls) -> "AssetCatalog":
        text = resources.files("treelayout.data").joinpath("catalog.json").read_text("utf-8")
        return cls._parse(json.loads(text))

    @classmethod
    def _parse(cls, doc: dict) -> "AssetCatalog":
        entries = {}
        for cat, row in doc["entries"].items():
            entries[cat] = CatalogEntry(
                category=cat,
                dims=Dim3(*row["dims"]),
                min_dims=Dim3(*row["min_dims"]),
                max_dims=Dim3(*row["max_dims"]),
                supportable=bool(row["supportable"]),
            )
        return cls(entries)


def resolve_assets(specs: list[ObjectSpec], catalog: AssetCatalog) -> list[ObjectSpec]:
    """Fill missing dims from catalog defaults, clamp given dims into the
    catalog range, and overwrite the supportable flag.  Unknown categories
    raise :class:`UnknownCategory`."""
    out: list[ObjectSpec] = []
    for spec in specs:
        entry = catalog.entry(spec.category)
        dims = entry.clamp(spec.dims) if spec.dims is not None else entry.dims
        out.append(
            ObjectSpec(
                id=spec.id,
                category=spec.category,
                dims=dims,
                supportable=entry.supportable,
                description=spec.description,
            )
        )
    return out
