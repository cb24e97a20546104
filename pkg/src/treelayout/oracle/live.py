"""Chat-completion-backed oracle over a provider-agnostic HTTP wire format.

Configuration comes from a JSON file (endpoint, model, temperature, and
the name of the environment variable holding the API key).  One retry on
transport failure, then :class:`OracleFailure`.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

import requests

from treelayout.oracle.base import OracleFailure, PlacementOracle, Transport
from treelayout.oracle.queries import OracleQuery, OracleReply
from treelayout.oracle.templates import render_prompt_templates

DEFAULT_KEY_ENV = "TREELAYOUT_API_KEY"


@dataclass
class LiveConfig:
    endpoint: str
    model: str
    temperature: float = 0.2
    api_key_env: str = DEFAULT_KEY_ENV
    timeout_s: float = 60.0

    @classmethod
    def from_file(cls, path: str | Path) -> "LiveConfig":
        doc = json.loads(Path(path).read_text("utf-8"))
        return cls(
            endpoint=doc["endpoint"],
            model=doc["model"],
            temperature=float(doc.get("temperature", 0.2)),
            api_key_env=doc.get("api_key_env", DEFAULT_KEY_ENV),
            timeout_s=float(doc.get("timeout_s", 60.0)),
        )


class LiveOracle(PlacementOracle):
    def __init__(self, config: LiveConfig):
        self.config = config
        key = os.environ.get(config.api_key_env, "")
        if not key:
            raise OracleFailure(f"API key env var {config.api_key_env} is not set")
        self._headers = {"Authorization": f"Bearer {key}", "Content-Type": "application/json"}

    def _post_once(self, body: dict) -> str:
        try:
            resp = requests.post(
                self.config.endpoint,
                headers=self._headers,
                json=body,
                timeout=self.config.timeout_s,
            )
        except requests.RequestException as exc:
            raise Transport(0, str(exc)) from exc
        if resp.status_code != 200:
            raise Transport(resp.status_code, resp.text[:500])
        doc = resp.json()
        try:
            return doc["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise Transport(200, f"malformed completion payload: {exc}") from exc

    def query(self, q: OracleQuery) -> OracleReply:
        body = {
            "model": self.config.model,
            "messages": render_prompt_templates(q),
            "temperature": self.config.temperature,
        }
        try:
            return OracleReply(self._post_once(body))
        except Transport:
            pass
        try:
            return OracleReply(self._post_once(body))
        except Transport as exc:
            raise OracleFailure(f"transport failed after retry: {exc}") from exc
