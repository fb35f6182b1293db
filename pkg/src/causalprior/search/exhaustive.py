from __future__ import annotations

import itertools
from functools import lru_cache

from ..constraints import ConstraintSet, count_satisfied
from ..errors import TooLarge
from ..model import Dag, DiscreteDataset, is_acyclic
from ..score import ScoreCache, ScoreFamily
from .options import ExhaustiveResult, better

MAX_NODES = 5


@lru_cache(maxsize=None)
def all_dags(n: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Parent tuples of every labeled DAG on n nodes (29281 for n=5)."""
    if n > MAX_NODES:
        raise TooLarge(f"exhaustive enumeration supports at most {MAX_NODES} nodes, got {n}")
    pairs = list(itertools.combinations(range(n), 2))
    out = []
    for states in itertools.product((0, 1, 2), repeat=len(pairs)):
        parents = [[] for _ in range(n)]
        for (i, j), s in zip(pairs, states):
            if s == 1:
                parents[j].append(i)
            elif s == 2:
                parents[i].append(j)
        if is_acyclic(parents, n):
            out.append(tuple(tuple(sorted(p)) for p in parents))
    return tuple(out)


def exhaustive_search(
    family: ScoreFamily,
    data: DiscreteDataset,
    constraints: ConstraintSet | None = None,
    cache: ScoreCache | None = None,
) -> ExhaustiveResult:
    """Global optimum by enumeration; satisfied-count first when constraints are given."""
    n = len(data.variables)
    if n > MAX_NODES:
        raise TooLarge(f"exhaustive search supports at most {MAX_NODES} nodes, got {n}")
    cache = cache or ScoreCache(family, data)
    best = best_edges = best_parents = None
    for parents in all_dags(n):
        score = 0.0
        for v in range(n):
            score += cache.local(v, parents[v])
        if constraints:
            sat = count_satisfied(Dag(n, parents), constraints)
        else:
            sat = 0
        key = (sat, score)
        if best is not None and key < best:
            continue
        edges = sorted((u, v) for v in range(n) for u in parents[v])
        if better(key, edges, best, best_edges):
            best, best_edges, best_parents = key, edges, parents
    return ExhaustiveResult(Dag(n, best_parents), best[1], best[0])
