"""Bundled ground-truth networks and replay fixtures."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .ingest import parse_bif
from .model import BayesNet

FIXTURE_MODEL = "fixture-chat"


def _data() -> Path:
    return Path(str(resources.files("causalprior") / "data"))


@lru_cache(maxsize=None)
def _registry() -> dict:
    return json.loads((_data() / "networks.json").read_text())


def available() -> list[str]:
    return sorted(_registry())


def network_path(name: str) -> Path:
    return _data() / _registry()[name]["file"]


def load_network(name: str) -> BayesNet:
    return parse_bif(network_path(name).read_text(encoding="utf-8"))


def network_domain(name: str) -> str:
    return _registry()[name]["domain"]


def fixture_dir(name: str) -> Path:
    return _data() / "fixtures" / name
