from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from ..model import VariableTable
from .client import ChatClient, TranscriptCache
from .parsing import ParseWarning, Statement, parse_edge_statements, parse_revision
from .prompts import build_prompts

STAGES = ("U", "C", "R")


@dataclass
class Message:
    role: str
    text: str
    stage: str


@dataclass
class Transcript:
    model: str
    messages: list[Message] = field(default_factory=list)

    def stages(self) -> list[str]:
        out = []
        for m in self.messages:
            if not out or out[-1] != m.stage:
                out.append(m.stage)
        return out

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "digest": self.digest(),
            "messages": [{"role": m.role, "stage": m.stage, "content": m.text} for m in self.messages],
        }

    def digest(self) -> str:
        blob = json.dumps([self.model, [(m.role, m.stage, m.text) for m in self.messages]], ensure_ascii=False)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


@dataclass
class ExtractionResult:
    transcript: Transcript
    statements: list[Statement]  # S', after revision
    proposed: list[Statement]  # S, before revision
    warnings: list[ParseWarning]
    client_calls: int = 0


def run_extraction(
    client: ChatClient,
    domain: str,
    variables: VariableTable,
    cache: TranscriptCache | None = None,
    understanding: str | None = None,
) -> ExtractionResult:
    """Understand, then propose edges, then revise; each stage sees the full history.

    ``understanding`` replaces the model's variable explanations (stage U)
    with user-supplied text, for when the model misreads a variable.
    """
    prompts = build_prompts(domain, variables)
    transcript = Transcript(client.model)
    history: list[dict] = []
    calls_before = client.calls

    def ask(stage: str, prompt: str) -> str:
        history.append({"role": "user", "content": prompt})
        transcript.messages.append(Message("user", prompt, stage))
        reply = cache.get(client.model, stage, history) if cache is not None else None
        if reply is None:
            reply = client.complete(list(history), stage)
            if cache is not None:
                cache.put(client.model, stage, list(history), reply)
        history.append({"role": "assistant", "content": reply})
        transcript.messages.append(Message("assistant", reply, stage))
        return reply

    if understanding is None:
        ask("U", prompts.understand)
    else:
        history.extend([{"role": "user", "content": prompts.understand},
                        {"role": "assistant", "content": understanding}])
        transcript.messages += [Message("user", prompts.understand, "U"),
                                Message("assistant", understanding, "U")]
    proposed, warnings = parse_edge_statements(ask("C", prompts.causal), variables)
    retained = list(proposed)
    if proposed:
        retained = parse_revision(ask("R", prompts.revision_for(proposed)), proposed)
    return ExtractionResult(transcript, retained, proposed, warnings, client.calls - calls_before)
