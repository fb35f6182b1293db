from __future__ import annotations

import logging
import re
from typing import NamedTuple, Sequence

from ..model import VariableTable

log = logging.getLogger(__name__)

_EDGE = re.compile(r"<edge>(.*?)<[/\\]edge>", re.S | re.I)
_ARROW = re.compile(r"→|->")
_VERDICT = re.compile(r"^\W*(\d+)\s*[.):-]?\s*\**\s*(INCORRECT|CORRECT)\b", re.I | re.M)


class Statement(NamedTuple):
    """``src`` causes ``dst``; both are variable symbols."""

    src: str
    dst: str


class ParseWarning(NamedTuple):
    item: str
    reason: str


def format_edges(statements: Sequence[Statement]) -> str:
    return "\n".join(f"<edge>{s.src}->{s.dst}</edge>" for s in statements)


def parse_edge_statements(text: str, variables: VariableTable) -> tuple[list[Statement], list[ParseWarning]]:
    out: list[Statement] = []
    warnings: list[ParseWarning] = []
    for m in _EDGE.finditer(text):
        item = m.group(1).strip()
        parts = _ARROW.split(item)
        if len(parts) != 2:
            warnings.append(ParseWarning(item, "expected exactly one arrow"))
            continue
        ends = []
        for sym in (p.strip() for p in parts):
            idx = variables.lookup(sym, case_insensitive=True)
            if idx is None:
                warnings.append(ParseWarning(item, f"unknown variable {sym!r}"))
            ends.append(idx)
        if None in ends:
            continue
        if ends[0] == ends[1]:
            warnings.append(ParseWarning(item, "self loop"))
            continue
        st = Statement(variables[ends[0]].symbol, variables[ends[1]].symbol)
        if st not in out:
            out.append(st)
    return out, warnings


def parse_revision(text: str, statements: Sequence[Statement]) -> list[Statement]:
    """Keep every statement not explicitly marked INCORRECT."""
    verdicts: dict[int, bool] = {}
    for m in _VERDICT.finditer(text):
        verdicts[int(m.group(1))] = m.group(2).upper() == "CORRECT"
    missing = [i for i in range(1, len(statements) + 1) if i not in verdicts]
    if missing:
        log.warning("no verdict for statement(s) %s; keeping them", ", ".join(map(str, missing)))
    return [s for i, s in enumerate(statements, start=1) if verdicts.get(i, True)]
