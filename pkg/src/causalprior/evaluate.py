"""Structural and qualitative metrics against a ground-truth DAG."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Iterable

from .constraints import ConstraintSet, Kind, is_satisfied
from .errors import NonAncestralConstraint, SizeMismatch, UnknownSymbol
from .model import Dag, VariableTable, reachable


@dataclass(frozen=True)
class ShdReport:
    extra: int
    missing: int
    reversed: int

    @property
    def delta(self) -> int:
        return self.extra + self.missing + self.reversed


@dataclass(frozen=True)
class EdgeF1Report:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class AcceptanceReport:
    precision: float | None  # None when nothing was accepted
    recall: float | None  # None when no constraint is correct
    accepted: int
    correct: int
    accepted_correct: int


def _check(learned: Dag, truth: Dag):
    if learned.n != truth.n:
        raise SizeMismatch(f"learned graph has {learned.n} nodes, truth has {truth.n}")


def shd(learned: Dag, truth: Dag) -> ShdReport:
    _check(learned, truth)
    le, te = learned.edge_set(), truth.edge_set()
    reversed_ = sum((v, u) in te for u, v in le)
    extra = sum((u, v) not in te and (v, u) not in te for u, v in le)
    missing = sum((u, v) not in le and (v, u) not in le for u, v in te)
    return ShdReport(extra, missing, reversed_)


def edge_f1(learned: Dag, truth: Dag) -> EdgeF1Report:
    _check(learned, truth)
    le, te = learned.edge_set(), truth.edge_set()
    tp = len(le & te)
    precision = tp / len(le) if le else 0.0
    recall = tp / len(te) if te else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return EdgeF1Report(precision, recall, f1)


def qualitative_accuracy(statements: Iterable, truth: Dag, variables: VariableTable) -> tuple[int, int]:
    """(true, total) where a statement x -> y is true iff truth has a directed path x ~> y."""
    true = total = 0
    for src, dst in statements:
        i, j = variables.lookup(src), variables.lookup(dst)
        if i is None or j is None:
            raise UnknownSymbol(src if i is None else dst)
        total += 1
        true += reachable(truth, i, j)
    return true, total


def constraint_acceptance(learned: Dag, constraints: ConstraintSet, truth: Dag) -> AcceptanceReport:
    _check(learned, truth)
    for c in constraints:
        if c.kind is not Kind.ANCESTRAL:
            raise NonAncestralConstraint(f"{c} is not an ancestral constraint")
    accepted = {c.key for c in constraints if is_satisfied(learned, c)}
    correct = {c.key for c in constraints if is_satisfied(truth, c)}
    both = len(accepted & correct)
    return AcceptanceReport(
        precision=both / len(accepted) if accepted else None,
        recall=both / len(correct) if correct else None,
        accepted=len(accepted),
        correct=len(correct),
        accepted_correct=both,
    )


def metrics_dict(learned: Dag, truth: Dag, constraints: ConstraintSet | None = None) -> dict:
    s = shd(learned, truth)
    out = {"shd": {**asdict(s), "delta": s.delta}, "f1": asdict(edge_f1(learned, truth))}
    if constraints:
        out["constraints"] = asdict(constraint_acceptance(learned, constraints, truth))
    return out


def _flatten(prefix, obj, out):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    else:
        out.append((prefix, obj))


def format_text(report: dict) -> str:
    """Render a (nested) report as ``key: value`` lines."""
    rows: list = []
    _flatten("", report, rows)
    lines = []
    for k, v in rows:
        if v is None:
            v = "undefined"
        elif isinstance(v, float):
            v = f"{v:.4f}"
        lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def format_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
