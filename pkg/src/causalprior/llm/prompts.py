"""Templates for the understand / causal-discovery / revision conversation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..errors import EmptyVariableTable
from ..model import VariableTable

UNDERSTAND = (
    "You are an expert on {domain}. You are investigating the cause-and-effect relationships between "
    "the following variables in your field. Variable abbreviations and values are presented as follows. "
    "Please understand the real meaning of each variable according to their possible values, and explain "
    "them in order."
)

CAUSAL = (
    "Based on the meaning of variables you provide, analyze the cause-and-effect relationships between "
    "them. Please give the results as a directed graph network in the form of "
    "<edge>variable1→variable2<\\edge>. Make sure that each edge represent a direct causality between "
    "the two variables."
)
CAUSAL_CONTRACT = (
    "Output format: put every edge on its own line exactly as <edge>A->B</edge>, where A and B are "
    "variable abbreviations from the list above. Do not put anything else inside edge tags."
)

REVISION = (
    "Based on your explanation, check whether the following causal statements are correct, and give "
    "the reasons."
)
REVISION_CONTRACT = (
    "Output format: for each numbered statement write one line of the form "
    "'<number>. CORRECT: <reason>' or '<number>. INCORRECT: <reason>'."
)


@dataclass(frozen=True)
class PromptBundle:
    understand: str
    causal: str
    revision: str  # header only; see revision_for

    def revision_for(self, statements: Sequence) -> str:
        lines = [self.revision]
        lines += [f"{i}. {src}→{dst}" for i, (src, dst) in enumerate(statements, start=1)]
        lines.append(REVISION_CONTRACT)
        return "\n".join(lines)


def variable_line(symbol: str, labels: Sequence[str]) -> str:
    return f"variable {symbol}, values {', '.join(labels)}"


def build_prompts(domain: str, variables: VariableTable) -> PromptBundle:
    if not domain or not domain.strip():
        raise ValueError("domain must be nonempty")
    if len(variables) == 0:
        raise EmptyVariableTable("no variables to describe")
    understand = "\n".join(
        [UNDERSTAND.format(domain=domain.strip())] + [variable_line(v.symbol, v.labels) for v in variables]
    )
    return PromptBundle(understand, CAUSAL + "\n" + CAUSAL_CONTRACT, REVISION)
