"""Structural constraints: edge existence/forbidden, order and ancestral.

Text format, one constraint per line (``#`` starts a comment)::

    smoker ~> cancer [conf=0.99999]   ancestral (directed path)
    smoker -> cancer                  edge must exist
    xray !> cancer                    edge forbidden
    smoker < xray                     order
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import networkx as nx

from .errors import ParseError, SelfLoopStatement, UnknownSymbol, WrongKind
from .model import Dag, VariableTable, reachable


class Kind(enum.Enum):
    EDGE = "->"
    FORBIDDEN = "!>"
    ORDER = "<"
    ANCESTRAL = "~>"


@dataclass(frozen=True)
class Constraint:
    kind: Kind
    src: int
    dst: int
    confidence: float = 1.0

    def __post_init__(self):
        if self.src == self.dst:
            raise ValueError("constraint endpoints must differ")
        if not 0.0 < self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside (0, 1]")

    @property
    def key(self):
        return (self.kind, self.src, self.dst)

    def __str__(self):
        return f"{self.src} {self.kind.value} {self.dst}"


@dataclass(frozen=True)
class ConstraintSet:
    items: tuple[Constraint, ...] = ()
    default_confidence: float = 1.0

    def __post_init__(self):
        seen = set()
        unique = []
        for c in self.items:
            if c.key not in seen:
                seen.add(c.key)
                unique.append(c)
        object.__setattr__(self, "items", tuple(unique))

    def __iter__(self) -> Iterator[Constraint]:
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def __bool__(self):
        return bool(self.items)

    def of_kind(self, kind: Kind) -> list[Constraint]:
        return [c for c in self.items if c.kind is kind]

    def with_confidence(self, confidence: float) -> "ConstraintSet":
        return ConstraintSet(
            tuple(Constraint(c.kind, c.src, c.dst, confidence) for c in self.items), confidence
        )


def ancestral(src: int, dst: int, confidence: float = 1.0) -> Constraint:
    return Constraint(Kind.ANCESTRAL, src, dst, confidence)


def from_statements(statements: Iterable, variables: VariableTable, confidence: float) -> ConstraintSet:
    """One ancestral constraint per (cause, effect) symbol pair, duplicates collapsed."""
    out = []
    for src, dst in statements:
        i, j = variables.lookup(src), variables.lookup(dst)
        for sym, idx in ((src, i), (dst, j)):
            if idx is None:
                raise UnknownSymbol(sym)
        if i == j:
            raise SelfLoopStatement(f"{src} -> {dst}")
        out.append(Constraint(Kind.ANCESTRAL, i, j, confidence))
    return ConstraintSet(tuple(out), confidence)


def infer_pruning(c: Constraint) -> tuple[Constraint, Constraint]:
    """x ~> y implies y is not a parent of x, and x precedes y."""
    if c.kind is not Kind.ANCESTRAL:
        raise WrongKind(f"expected an ancestral constraint, got {c.kind.name}")
    return (
        Constraint(Kind.FORBIDDEN, c.dst, c.src, c.confidence),
        Constraint(Kind.ORDER, c.src, c.dst, c.confidence),
    )


def order_pairs(constraints: ConstraintSet) -> set[tuple[int, int]]:
    """All (before, after) pairs an ordering must respect."""
    pairs = set()
    for c in constraints:
        if c.kind is Kind.ANCESTRAL:
            pairs.add((infer_pruning(c)[1].src, c.dst))
        elif c.kind in (Kind.ORDER, Kind.EDGE):
            pairs.add((c.src, c.dst))
    return pairs


def forbidden_pairs(constraints: ConstraintSet) -> set[tuple[int, int]]:
    pairs = {(c.src, c.dst) for c in constraints if c.kind is Kind.FORBIDDEN}
    pairs |= {(c.dst, c.src) for c in constraints if c.kind is Kind.ANCESTRAL}
    return pairs


def is_satisfied(dag: Dag, c: Constraint) -> bool:
    if c.kind is Kind.EDGE:
        return dag.has_edge(c.src, c.dst)
    if c.kind is Kind.FORBIDDEN:
        return not dag.has_edge(c.src, c.dst)
    if c.kind is Kind.ANCESTRAL:
        return reachable(dag, c.src, c.dst)
    return not reachable(dag, c.dst, c.src)


def count_satisfied(dag: Dag, constraints: ConstraintSet) -> int:
    if not constraints:
        return 0
    desc = {}
    count = 0
    for c in constraints:
        if c.kind in (Kind.ANCESTRAL, Kind.ORDER):
            start = c.src if c.kind is Kind.ANCESTRAL else c.dst
            if start not in desc:
                desc[start] = dag.descendants(start)
            hit = (c.dst if c.kind is Kind.ANCESTRAL else c.src) in desc[start]
            count += hit if c.kind is Kind.ANCESTRAL else not hit
        else:
            count += is_satisfied(dag, c)
    return count


@dataclass
class ConflictReport:
    cycles: list[list[int]] = field(default_factory=list)
    contradictions: list[tuple[int, int]] = field(default_factory=list)
    unreachable: list[Constraint] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.cycles or self.contradictions or self.unreachable)

    def describe(self, symbols: list[str] | None = None) -> str:
        name = (lambda i: symbols[i]) if symbols else str
        parts = []
        for cyc in self.cycles:
            parts.append("cycle " + " -> ".join(name(i) for i in cyc + cyc[:1]))
        for u, v in self.contradictions:
            parts.append(f"edge {name(u)} -> {name(v)} both required and forbidden")
        for c in self.unreachable:
            parts.append(f"no admissible path {name(c.src)} ~> {name(c.dst)}")
        return "; ".join(parts) if parts else "no conflicts"


def detect_conflicts(constraints: ConstraintSet, n: int | None = None) -> ConflictReport:
    """Static consistency check.

    Reports cycles in the precedence relation formed by ancestral, order
    and existence constraints, and existence/forbidden contradictions.
    When the node count ``n`` is known it also reports ancestral
    constraints whose path cannot be routed around forbidden edges
    without reversing a required precedence.
    """
    report = ConflictReport()
    g = nx.DiGraph()
    g.add_edges_from(order_pairs(constraints))
    for scc in nx.strongly_connected_components(g):
        if len(scc) > 1:
            cycle = nx.find_cycle(g.subgraph(scc))
            report.cycles.append([u for u, _ in cycle])
    forbidden = {(c.src, c.dst) for c in constraints if c.kind is Kind.FORBIDDEN}
    for c in constraints.of_kind(Kind.EDGE):
        if (c.src, c.dst) in forbidden:
            report.contradictions.append((c.src, c.dst))
    if report.cycles or n is None:
        return report

    before = {u: nx.descendants(g, u) if u in g else set() for u in range(n)}

    def precedes(a, b):
        return b in before[a]

    for c in constraints.of_kind(Kind.ANCESTRAL):
        a, b = c.src, c.dst
        allowed = [m for m in range(n) if m in (a, b) or not (precedes(m, a) or precedes(b, m))]
        seen = {a}
        stack = [a]
        found = False
        while stack and not found:
            u = stack.pop()
            for v in allowed:
                if v in seen or (u, v) in forbidden or precedes(v, u):
                    continue
                if v == b:
                    found = True
                    break
                seen.add(v)
                stack.append(v)
        if not found:
            report.unreachable.append(c)
    return report


_LINE = re.compile(r"^(\S+?)\s*(~>|->|!>|<)\s*(\S+?)\s*(?:\[\s*conf\s*=\s*([^\]\s]+)\s*\])?$")


def parse_constraints(text: str, variables: VariableTable, default_confidence: float = 1.0) -> ConstraintSet:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if m is None:
            raise ParseError(lineno, f"cannot parse constraint {line!r}")
        a, op, b, conf = m.groups()
        i, j = variables.lookup(a), variables.lookup(b)
        for sym, idx in ((a, i), (b, j)):
            if idx is None:
                raise UnknownSymbol(f"line {lineno}: {sym}")
        if i == j:
            raise SelfLoopStatement(f"line {lineno}: {line}")
        try:
            confidence = float(conf) if conf is not None else default_confidence
            out.append(Constraint(Kind(op), i, j, confidence))
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None
    return ConstraintSet(tuple(out), default_confidence)


def format_constraints(constraints: ConstraintSet, variables: VariableTable) -> str:
    syms = variables.symbols
    lines = []
    for c in constraints:
        line = f"{syms[c.src]} {c.kind.value} {syms[c.dst]}"
        if c.confidence != 1.0:
            line += f" [conf={c.confidence!r}]"
        lines.append(line)
    return "\n".join(lines) + ("\n" if lines else "")
