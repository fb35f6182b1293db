"""Chat-completion clients and the on-disk transcript cache.

Cache/fixture files are JSON documents named ``<sha256 hex>.json``::

    {"request": {"model": ..., "stage": "U" | "C" | "R", "messages": [{"role": ..., "content": ...}]},
     "response": {"content": ...}}

The digest covers ``[model, stage, messages]`` serialised with sorted keys,
so fixtures can be authored by hand with :func:`write_exchange`.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import time
from pathlib import Path

import requests

from ..errors import EndpointError, FixtureMissing

log = logging.getLogger(__name__)

TOKEN_ENV = "CAUSALPRIOR_API_KEY"


def exchange_digest(model: str, stage: str, messages: list[dict]) -> str:
    blob = json.dumps([model, stage, messages], sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


class TranscriptCache:
    def __init__(self, directory):
        self.directory = Path(directory)

    def path(self, model, stage, messages) -> Path:
        return self.directory / f"{exchange_digest(model, stage, messages)}.json"

    def get(self, model: str, stage: str, messages: list[dict]) -> str | None:
        p = self.path(model, stage, messages)
        if not p.exists():
            return None
        return json.loads(p.read_text(encoding="utf-8"))["response"]["content"]

    def put(self, model: str, stage: str, messages: list[dict], content: str) -> Path:
        return write_exchange(self.directory, model, stage, messages, content)


def write_exchange(directory, model: str, stage: str, messages: list[dict], content: str) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    doc = {
        "request": {"model": model, "stage": stage, "messages": messages},
        "response": {"content": content},
    }
    target = directory / f"{exchange_digest(model, stage, messages)}.json"
    # atomic replace: concurrent writers of one digest end with a whole file
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")
    os.replace(tmp, target)
    return target


class ChatClient:
    """Interface: ``complete`` returns the assistant reply for a message list."""

    model: str = "unknown"
    calls: int = 0

    def complete(self, messages: list[dict], stage: str) -> str:
        raise NotImplementedError


class HttpChatClient(ChatClient):
    def __init__(self, endpoint: str, model: str, token: str | None = None, retries: int = 3,
                 backoff: float = 1.0, timeout: float = 120.0, session=None):
        self.endpoint = endpoint
        self.model = model
        self.token = token if token is not None else os.environ.get(TOKEN_ENV)
        self.retries = retries
        self.backoff = backoff
        self.timeout = timeout
        self.session = session or requests.Session()
        self.calls = 0

    def complete(self, messages, stage):
        payload = {"model": self.model, "messages": messages, "temperature": 0}
        headers = {"Content-Type": "application/json"}
        if self.token:
            headers["Authorization"] = f"Bearer {self.token}"
        last = None
        for attempt in range(self.retries + 1):
            if attempt:
                time.sleep(self.backoff * 2 ** (attempt - 1))
            self.calls += 1
            try:
                resp = self.session.post(self.endpoint, json=payload, headers=headers, timeout=self.timeout)
                resp.raise_for_status()
                return resp.json()["choices"][0]["message"]["content"]
            except (requests.RequestException, KeyError, IndexError, ValueError) as exc:
                last = exc
                log.warning("stage %s attempt %d failed: %s", stage, attempt + 1, exc)
        raise EndpointError(f"{self.endpoint}: giving up after {self.retries} retries ({last})")


class ReplayClient(ChatClient):
    """Serves recorded responses from a fixture directory; never touches the network."""

    def __init__(self, directory, model: str = "replay"):
        self.cache = TranscriptCache(directory)
        self.model = model
        self.calls = 0

    def complete(self, messages, stage):
        self.calls += 1
        content = self.cache.get(self.model, stage, messages)
        if content is None:
            raise FixtureMissing(f"no fixture {self.cache.path(self.model, stage, messages).name} for stage {stage}")
        return content
