"""Oracle interface and shared error types."""

from __future__ import annotations

from abc import ABC, abstractmethod

from treelayout.model import SearchTrace
from treelayout.oracle.queries import OracleQuery, OracleReply


class OracleFailure(Exception):
    """The oracle could not produce any reply (transport exhausted,
    replay miss, or repeated malformed hierarchy replies)."""


class Transport(OracleFailure):
    def __init__(self, status: int, detail: str = ""):
        super().__init__(f"transport error {status}: {detail}")
        self.status = status


class FingerprintMiss(OracleFailure):
    def __init__(self, fp: str, query_text: str):
        super().__init__(f"no transcript entry for fingerprint {fp}; query was:\n{query_text}")
        self.fp = fp
        self.query_text = query_text


class PlacementOracle(ABC):
    """The thought generator: answers typed queries with raw text.

    Implementations must be safe for concurrent ``query`` calls; replies
    are pure functions of the query for the deterministic and replay
    oracles.
    """

    @abstractmethod
    def query(self, q: OracleQuery) -> OracleReply: ...


class OracleSession:
    """Couples an oracle to a trace so every call is counted."""

    def __init__(self, oracle: PlacementOracle, trace: SearchTrace):
        self.oracle = oracle
        self.trace = trace

    def ask(self, q: OracleQuery) -> str:
        self.trace.oracle_calls += 1
        return self.oracle.query(q).text
