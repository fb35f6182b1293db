"""Decomposable data scores (BIC, BDeu) and the confidence log-prior.

All scores are in natural-log units, larger is better.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.special import gammaln

from .constraints import ConstraintSet, is_satisfied
from .errors import ConfidenceOutOfRange, EmptyDataset
from .ingest import parent_config_index
from .model import Dag, DiscreteDataset


@dataclass(frozen=True)
class ScoreFamily:
    kind: str = "BIC"
    ess: float = 1.0

    def __post_init__(self):
        kind = self.kind.upper()
        if kind not in ("BIC", "BDEU"):
            raise ValueError(f"unknown score family {self.kind!r}")
        object.__setattr__(self, "kind", "BDeu" if kind == "BDEU" else "BIC")
        if self.kind == "BDeu" and not self.ess > 0:
            raise ValueError("BDeu needs ess > 0")

    def __str__(self):
        return f"BDeu(ess={self.ess:g})" if self.kind == "BDeu" else "BIC"


def family_counts(child: int, parents: Iterable[int], data: DiscreteDataset) -> np.ndarray:
    """Contingency table N[j, k] of parent configuration j and child value k."""
    card = data.variables.cardinalities
    parents = sorted(parents)
    q = int(np.prod(card[parents])) if parents else 1
    r = int(card[child])
    cfg = parent_config_index(data.rows, parents, card)
    return np.bincount(cfg * r + data.rows[:, child], minlength=q * r).reshape(q, r)


def local_score(family: ScoreFamily, child: int, parents: Iterable[int], data: DiscreteDataset) -> float:
    parents = tuple(sorted(parents))
    if child in parents:
        raise ValueError("parent set contains the child")
    if data.N == 0:
        raise EmptyDataset("cannot score an empty dataset")
    counts = family_counts(child, parents, data).astype(float)
    q, r = counts.shape
    if family.kind == "BIC":
        nj = counts.sum(axis=1, keepdims=True)
        nz = counts > 0
        ll = float(np.sum(counts[nz] * np.log((counts / np.where(nj > 0, nj, 1.0))[nz])))
        return ll - 0.5 * math.log(data.N) * q * (r - 1)
    a_jk = family.ess / (q * r)
    a_j = family.ess / q
    nj = counts.sum(axis=1)
    return float(
        np.sum(gammaln(a_j) - gammaln(a_j + nj))
        + np.sum(gammaln(a_jk + counts) - gammaln(a_jk))
    )


class ScoreCache:
    """Memo of local scores for one (family, dataset) pair.

    Safe for concurrent use: two workers may compute the same key, but the
    value is deterministic so either write is fine.
    """

    def __init__(self, family: ScoreFamily, data: DiscreteDataset):
        self.family = family
        self.data = data
        self._scores: dict[tuple[int, tuple[int, ...]], float] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def local(self, child: int, parents: Iterable[int]) -> float:
        key = (child, tuple(sorted(parents)))
        value = self._scores.get(key)
        if value is not None:
            self.hits += 1
            return value
        self.misses += 1
        value = local_score(self.family, child, key[1], self.data)
        with self._lock:
            self._scores[key] = value
        return value

    def clear(self):
        with self._lock:
            self._scores.clear()

    def __len__(self):
        return len(self._scores)

    def check(self, family: ScoreFamily, data: DiscreteDataset):
        if family != self.family or data is not self.data:
            raise ValueError("score cache belongs to a different family/dataset")


def total_score(family: ScoreFamily, dag: Dag, data: DiscreteDataset, cache: ScoreCache | None = None) -> float:
    if dag.n != len(data.variables):
        raise ValueError(f"dag has {dag.n} nodes but data has {len(data.variables)} variables")
    if cache is None:
        cache = ScoreCache(family, data)
    else:
        cache.check(family, data)
    total = 0.0
    for v in range(dag.n):
        total += cache.local(v, dag.parents[v])
    return total


def _check_confidences(constraints: ConstraintSet):
    for c in constraints:
        if not 0.0 < c.confidence < 1.0:
            raise ConfidenceOutOfRange(
                f"{c}: confidence {c.confidence} outside (0, 1); use hard search for certain constraints"
            )


def prior_score(dag: Dag, constraints: ConstraintSet) -> float:
    """Independent Bernoulli log-prior: ln(c) per satisfied constraint, ln(1-c) per violated one."""
    _check_confidences(constraints)
    total = 0.0
    for c in constraints:
        total += math.log(c.confidence) if is_satisfied(dag, c) else math.log1p(-c.confidence)
    return total


def soft_score(
    family: ScoreFamily,
    dag: Dag,
    data: DiscreteDataset,
    constraints: ConstraintSet,
    cache: ScoreCache | None = None,
) -> float:
    return total_score(family, dag, data, cache) + prior_score(dag, constraints)
