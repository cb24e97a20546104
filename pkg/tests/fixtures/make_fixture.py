"""Regenerates the shipped live-oracle transcript fixture.

The "live" replies are deterministic-oracle answers wrapped in the kind
of prose a hosted model produces, so the fixture exercises the tolerant
reply parsers without needing network access.  Run from the repo root:

    python tests/fixtures/make_fixture.py
"""

from pathlib import Path

from treelayout.model import SearchConfig
from treelayout.oracle.base import PlacementOracle
from treelayout.oracle.deterministic import DeterministicOracle
from treelayout.oracle.queries import (
    CellsQuery,
    FullLayoutQuery,
    OracleQuery,
    OracleReply,
    RoomQuery,
    SideEvalQuery,
    SideQuery,
)
from treelayout.oracle.transcript import RecordingOracle
from treelayout.pipeline import generate_scene
from treelayout.sceneio import write_scene

PROMPT = "A modern bedroom with a comfortable queen-sized bed"
SEED = 11


class ChattyOracle(PlacementOracle):
    """Wraps an oracle and pads its replies with model-style prose."""

    def __init__(self, inner: PlacementOracle):
        self.inner = inner

    def query(self, q: OracleQuery) -> OracleReply:
        text = self.inner.query(q).text
        if isinstance(q, SideQuery):
            return OracleReply(f"Considering the free space, I would go with: {text}.")
        if isinstance(q, SideEvalQuery):
            return OracleReply(text + " (judging by the grid above)")
        if isinstance(q, CellsQuery):
            return OracleReply(f"The best spot would be {text}. That keeps it close by.")
        if isinstance(q, (RoomQuery, FullLayoutQuery)):
            return OracleReply("Sure, here is my suggestion:\n" + text)
        return OracleReply("Here is what I would put there:\n" + text + "\nThat should work nicely.")


def main() -> None:
    fixtures = Path(__file__).parent
    recorder = RecordingOracle(
        ChattyOracle(DeterministicOracle(seed=SEED)), model_id="chatty-fixture", seed=SEED
    )
    config = SearchConfig(seed=SEED)
    scene = generate_scene(PROMPT, config, recorder)
    recorder.transcript.metadata["prompt"] = PROMPT
    recorder.transcript.metadata["config_seed"] = SEED
    recorder.transcript.dump(fixtures / "live_transcript.jsonl")
    write_scene(scene, fixtures / "live_scene.json")
    print(f"recorded {len(recorder.transcript.records)} oracle calls, "
          f"{len(scene.placements)} placements")


if __name__ == "__main__":
    main()
