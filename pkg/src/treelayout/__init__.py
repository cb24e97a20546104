"""treelayout: indoor scene layout synthesis via oracle-guided tree search.

A room description becomes a hierarchical plan (room, regions, floor
objects, supported objects); a global-local tree search then places
every object on an occupancy grid whose candidate cells are named with
emojis so a language oracle can point at positions by name.  A seeded
deterministic oracle makes the whole pipeline reproducible offline; a
chat-completion oracle and transcript record/replay cover live use.

Quick start::

    from treelayout import DeterministicOracle, SearchConfig, generate_scene

    scene = generate_scene(
        "A modern bedroom with a comfortable queen-sized bed",
        SearchConfig(seed=0),
        DeterministicOracle(seed=0),
    )
"""

from treelayout.evaluate import search_stats, validity_metrics
from treelayout.model import Scene, SearchConfig, SearchMode
from treelayout.oracle import DeterministicOracle, LiveConfig, LiveOracle, ReplayOracle
from treelayout.pipeline import generate_scene
from treelayout.render import render_scene
from treelayout.sceneio import read_scene, scene_to_text, write_scene

__version__ = "0.1.0"

__all__ = [
    "DeterministicOracle",
    "LiveConfig",
    "LiveOracle",
    "ReplayOracle",
    "Scene",
    "SearchConfig",
    "SearchMode",
    "generate_scene",
    "read_scene",
    "render_scene",
    "scene_to_text",
    "search_stats",
    "validity_metrics",
    "write_scene",
    "__version__",
]
