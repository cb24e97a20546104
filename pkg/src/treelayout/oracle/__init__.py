"""Oracle implementations: deterministic heuristic, live HTTP, and replay."""

from treelayout.oracle.base import (
    FingerprintMiss,
    OracleFailure,
    OracleSession,
    PlacementOracle,
    Transport,
)
from treelayout.oracle.deterministic import DeterministicOracle, NO_LEGAL_OPTION
from treelayout.oracle.live import LiveConfig, LiveOracle
from treelayout.oracle.queries import (
    CellsQuery,
    FullLayoutQuery,
    ObjectsQuery,
    OracleQuery,
    OracleReply,
    RegionQuery,
    RoomQuery,
    SideEvalQuery,
    SideQuery,
    SpatialContext,
    SupportedQuery,
    fingerprint,
)
from treelayout.oracle.templates import MissingTemplate, render_prompt_templates, template_version
from treelayout.oracle.transcript import RecordingOracle, ReplayOracle, Transcript

__all__ = [
    "CellsQuery",
    "DeterministicOracle",
    "FingerprintMiss",
    "FullLayoutQuery",
    "LiveConfig",
    "LiveOracle",
    "MissingTemplate",
    "NO_LEGAL_OPTION",
    "ObjectsQuery",
    "OracleFailure",
    "OracleQuery",
    "OracleReply",
    "OracleSession",
    "PlacementOracle",
    "RecordingOracle",
    "RegionQuery",
    "ReplayOracle",
    "RoomQuery",
    "SideEvalQuery",
    "SideQuery",
    "SpatialContext",
    "SupportedQuery",
    "Transcript",
    "Transport",
    "fingerprint",
    "render_prompt_templates",
    "template_version",
]
