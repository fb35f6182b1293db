"""Core value types: variables, DAGs, Bayesian networks and datasets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import CycleRejected, MissingEdge, UnknownSymbol


@dataclass(frozen=True)
class Variable:
    index: int
    symbol: str
    cardinality: int
    labels: tuple[str, ...]
    description: str | None = None

    def __post_init__(self):
        if not self.symbol:
            raise ValueError("variable symbol must be nonempty")
        if self.cardinality < 2:
            raise ValueError(f"{self.symbol}: cardinality must be >= 2")
        if len(self.labels) != self.cardinality:
            raise ValueError(f"{self.symbol}: {len(self.labels)} labels for cardinality {self.cardinality}")


@dataclass(frozen=True)
class VariableTable:
    entries: tuple[Variable, ...]

    def __post_init__(self):
        seen = set()
        for i, v in enumerate(self.entries):
            if v.index != i:
                raise ValueError(f"variable {v.symbol} has index {v.index}, expected {i}")
            if v.symbol in seen:
                raise ValueError(f"duplicate symbol {v.symbol}")
            seen.add(v.symbol)

    @classmethod
    def build(cls, specs: Iterable[tuple]) -> "VariableTable":
        """Build from ``(symbol, labels)`` or ``(symbol, labels, description)`` tuples."""
        entries = []
        for i, spec in enumerate(specs):
            symbol, labels = spec[0], tuple(spec[1])
            description = spec[2] if len(spec) > 2 else None
            entries.append(Variable(i, symbol, len(labels), labels, description))
        return cls(tuple(entries))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def symbols(self) -> list[str]:
        return [v.symbol for v in self.entries]

    @property
    def cardinalities(self) -> np.ndarray:
        return np.array([v.cardinality for v in self.entries], dtype=np.int64)

    def index_of(self, symbol: str) -> int:
        for v in self.entries:
            if v.symbol == symbol:
                return v.index
        raise UnknownSymbol(symbol)

    def lookup(self, symbol: str, case_insensitive: bool = False) -> int | None:
        if not case_insensitive:
            for v in self.entries:
                if v.symbol == symbol:
                    return v.index
            return None
        key = symbol.casefold()
        for v in self.entries:
            if v.symbol.casefold() == key:
                return v.index
        return None


def _descendants(children: Sequence[Iterable[int]], src: int) -> set[int]:
    seen: set[int] = set()
    stack = list(children[src])
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        stack.extend(children[u])
    return seen


def is_acyclic(parents: Sequence[Iterable[int]], n: int) -> bool:
    """Kahn elimination; True iff a topological order exists."""
    indeg = [0] * n
    children: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        for u in parents[v]:
            indeg[v] += 1
            children[u].append(v)
    queue = [v for v in range(n) if indeg[v] == 0]
    removed = 0
    while queue:
        u = queue.pop()
        removed += 1
        for v in children[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    return removed == n


@dataclass(frozen=True)
class Dag:
    """Directed acyclic graph stored as sorted parent tuples, one per node."""

    n: int
    parents: tuple[tuple[int, ...], ...]
    _children: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        parents = tuple(tuple(sorted(set(p))) for p in self.parents)
        if len(parents) != self.n:
            raise ValueError(f"expected {self.n} parent sets, got {len(parents)}")
        for v, ps in enumerate(parents):
            for u in ps:
                if not 0 <= u < self.n:
                    raise ValueError(f"parent index {u} out of range")
                if u == v:
                    raise ValueError(f"node {v} is its own parent")
        if not is_acyclic(parents, self.n):
            raise CycleRejected("parent relation contains a cycle")
        children: list[list[int]] = [[] for _ in range(self.n)]
        for v, ps in enumerate(parents):
            for u in ps:
                children[u].append(v)
        object.__setattr__(self, "parents", parents)
        object.__setattr__(self, "_children", tuple(tuple(c) for c in children))

    @classmethod
    def empty(cls, n: int) -> "Dag":
        return cls(n, tuple(() for _ in range(n)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Dag":
        parents: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            parents[v].add(u)
        return cls(n, tuple(tuple(p) for p in parents))

    @property
    def children(self) -> tuple[tuple[int, ...], ...]:
        return self._children

    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for v in range(self.n) for u in self.parents[v])

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges())

    def has_edge(self, u: int, v: int) -> bool:
        return u in self.parents[v]

    def num_edges(self) -> int:
        return sum(len(p) for p in self.parents)

    def descendants(self, src: int) -> set[int]:
        return _descendants(self._children, src)

    def topological_order(self) -> list[int]:
        indeg = [len(p) for p in self.parents]
        ready = [v for v in range(self.n) if indeg[v] == 0]
        order = []
        while ready:
            ready.sort()
            u = ready.pop(0)
            order.append(u)
            for v in self._children[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    ready.append(v)
        return order

    def with_parents(self, v: int, parents: Iterable[int]) -> "Dag":
        ps = list(self.parents)
        ps[v] = tuple(parents)
        return Dag(self.n, tuple(ps))


def reachable(dag: Dag, src: int, dst: int) -> bool:
    """True iff a directed path of length >= 1 leads from src to dst."""
    return dst in dag.descendants(src)


class Move(NamedTuple):
    kind: str  # "add" | "delete" | "reverse"
    u: int
    v: int


def apply_move(dag: Dag, move: Move) -> Dag:
    kind, u, v = move
    if kind == "add":
        if dag.has_edge(u, v):
            raise ValueError(f"edge {u}->{v} already present")
        if u == v or u in dag.descendants(v):
            raise CycleRejected(f"adding {u}->{v} creates a cycle")
        return dag.with_parents(v, dag.parents[v] + (u,))
    if not dag.has_edge(u, v):
        raise MissingEdge(f"no edge {u}->{v}")
    removed = dag.with_parents(v, [p for p in dag.parents[v] if p != u])
    if kind == "delete":
        return removed
    if kind == "reverse":
        if u in removed.descendants(v):
            raise CycleRejected(f"reversing {u}->{v} creates a cycle")
        return removed.with_parents(u, removed.parents[u] + (v,))
    raise ValueError(f"unknown move kind {kind!r}")


@dataclass(frozen=True)
class BayesNet:
    """A DAG with one CPT per node.

    ``cpts[i]`` has shape ``(q_i, r_i)``: rows are parent configurations in
    mixed-radix order over ``dag.parents[i]`` (first parent most significant).
    """

    variables: VariableTable
    dag: Dag
    cpts: tuple[np.ndarray, ...]
    name: str = "network"

    def __post_init__(self):
        if len(self.variables) != self.dag.n or len(self.cpts) != self.dag.n:
            raise ValueError("variables, dag and cpts disagree on node count")
        card = self.variables.cardinalities
        for i, cpt in enumerate(self.cpts):
            q = int(np.prod(card[list(self.dag.parents[i])])) if self.dag.parents[i] else 1
            if cpt.shape != (q, card[i]):
                raise ValueError(f"cpt of {self.variables[i].symbol} has shape {cpt.shape}, expected {(q, card[i])}")
            if np.any(cpt < 0) or np.any(cpt > 1):
                raise ValueError(f"cpt of {self.variables[i].symbol} has entries outside [0,1]")
            if np.any(np.abs(cpt.sum(axis=1) - 1.0) > 1e-9):
                raise ValueError(f"cpt rows of {self.variables[i].symbol} do not sum to 1")
            cpt.setflags(write=False)


@dataclass(frozen=True)
class DiscreteDataset:
    variables: VariableTable
    rows: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.int64)
        if rows.ndim != 2 or rows.shape[1] != len(self.variables):
            raise ValueError(f"rows must have shape (N, {len(self.variables)})")
        if rows.size and (rows.min() < 0 or np.any(rows.max(axis=0) >= self.variables.cardinalities)):
            raise ValueError("category code out of range")
        rows = rows.copy()
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def N(self) -> int:
        return self.rows.shape[0]

    def __eq__(self, other):
        if not isinstance(other, DiscreteDataset):
            return NotImplemented
        return self.variables == other.variables and np.array_equal(self.rows, other.rows)

    __hash__ = None
