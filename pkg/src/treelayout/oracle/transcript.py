"""Transcript record/replay: byte-exact reproduction of oracle-driven runs.

A transcript is a JSONL file: a metadata header line followed by one
record per oracle call, in call order, each holding the query
fingerprint and the raw reply text.  Replay looks queries up by
fingerprint; any miss (including a template-version mismatch) raises
:class:`FingerprintMiss`.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from treelayout.oracle.base import FingerprintMiss, PlacementOracle
from treelayout.oracle.queries import OracleQuery, OracleReply, fingerprint
from treelayout.oracle.templates import template_version


@dataclass
class Transcript:
    records: list[tuple[str, str]] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def lookup(self) -> dict[str, str]:
        return dict(self.records)

    def dump(self, path: str | Path) -> None:
        lines = [json.dumps({"kind": "meta", **self.metadata}, sort_keys=True)]
        for fp, reply in self.records:
            lines.append(json.dumps({"fp": fp, "reply": reply}, sort_keys=True))
        Path(path).write_text("\n".join(lines) + "\n", "utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "Transcript":
        records: list[tuple[str, str]] = []
        metadata: dict = {}
        for line in Path(path).read_text("utf-8").splitlines():
            if not line.strip():
                continue
            row = json.loads(line)
            if row.get("kind") == "meta":
                metadata = {k: v for k, v in row.items() if k != "kind"}
            else:
                records.append((row["fp"], row["reply"]))
        return cls(records=records, metadata=metadata)


class RecordingOracle(PlacementOracle):
    """Wraps any oracle and captures (fingerprint, reply) pairs in order."""

    def __init__(self, inner: PlacementOracle, model_id: str = "", seed: int | None = None):
        self.inner = inner
        self.transcript = Transcript(
            metadata={
                "model": model_id,
                "seed": seed,
                "template_version": template_version(),
                "recorded_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            }
        )
        self._seen: set[str] = set()

    def query(self, q: OracleQuery) -> OracleReply:
        fp = fingerprint(q, template_version())
        if fp in self._seen:
            raise ValueError(f"duplicate query fingerprint while recording: {fp}")
        reply = self.inner.query(q)
        self._seen.add(fp)
        self.transcript.records.append((fp, reply.text))
        return reply


class ReplayOracle(PlacementOracle):
    """Serves replies from a transcript; read-only after load."""

    def __init__(self, transcript: Transcript):
        recorded = transcript.metadata.get("template_version")
        if recorded is not None and recorded != template_version():
            raise FingerprintMiss(
                fp="-",
                query_text=(
                    f"transcript recorded with template version {recorded!r}, "
                    f"current is {template_version()!r}"
                ),
            )
        self._replies = transcript.lookup()

    @classmethod
    def from_file(cls, path: str | Path) -> "ReplayOracle":
        return cls(Transcript.load(path))

    def query(self, q: OracleQuery) -> OracleReply:
        fp = fingerprint(q, template_version())
        try:
            return OracleReply(self._replies[fp])
        except KeyError:
            raise FingerprintMiss(fp, q.canonical_text()) from None
