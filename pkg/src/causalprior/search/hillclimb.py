"""Greedy hill climbing over DAGs (add / delete / reverse), plain or with a soft prior."""

from __future__ import annotations

import math
from collections import deque

from ..constraints import ConstraintSet, Kind, is_satisfied
from ..errors import ConfidenceOutOfRange
from ..model import Dag, DiscreteDataset, Move
from ..score import ScoreCache, ScoreFamily, soft_score
from .options import ClimbResult, SearchOptions, SoftResult, better, restart_rng, run_restarts

_EPS = 1e-10


def _descendants(children, src):
    seen = set()
    stack = list(children[src])
    while stack:
        u = stack.pop()
        if u not in seen:
            seen.add(u)
            stack.extend(children[u])
    return seen


class _Prior:
    """Bernoulli constraint log-prior evaluated on raw parent lists."""

    def __init__(self, constraints: ConstraintSet):
        self.items = [
            (c.kind, c.src, c.dst, math.log(c.confidence), math.log1p(-c.confidence)) for c in constraints
        ]

    def __call__(self, parents) -> float:
        n = len(parents)
        children = [[] for _ in range(n)]
        for v, ps in enumerate(parents):
            for u in ps:
                children[u].append(v)
        desc = {}
        total = 0.0
        for kind, a, b, yes, no in self.items:
            if kind is Kind.EDGE:
                ok = a in parents[b]
            elif kind is Kind.FORBIDDEN:
                ok = a not in parents[b]
            else:
                start, target = (a, b) if kind is Kind.ANCESTRAL else (b, a)
                if start not in desc:
                    desc[start] = _descendants(children, start)
                ok = (target in desc[start]) == (kind is Kind.ANCESTRAL)
            total += yes if ok else no
        return total


def _random_dag(n: int, max_indegree: int, rng) -> list[list[int]]:
    order = rng.permutation(n)
    p_edge = 1.0 / max(n - 1, 1)
    parents = [[] for _ in range(n)]
    for j in range(1, n):
        cands = [int(order[i]) for i in range(j) if rng.random() < p_edge]
        if len(cands) > max_indegree:
            cands = [int(x) for x in rng.choice(cands, size=max_indegree, replace=False)]
        parents[int(order[j])] = sorted(cands)
    return parents


def _climb(start, local, k, max_iters, tabu_len, prior=None):
    """Best-improvement local search; returns (parent lists, data score, prior score)."""
    n = len(start)
    parents = [sorted(p) for p in start]
    node = [local(v, parents[v]) for v in range(n)]
    pri = prior(parents) if prior else 0.0
    tabu = deque(maxlen=tabu_len) if tabu_len else None

    for _ in range(max_iters):
        children = [[] for _ in range(n)]
        for v in range(n):
            for u in parents[v]:
                children[u].append(v)
        desc = [_descendants(children, v) for v in range(n)]
        best_delta, best_move, best_state = _EPS, None, None
        for v in range(n):
            for u in range(n):
                if u == v:
                    continue
                if u in parents[v]:
                    cand = [Move("delete", u, v)]
                    if len(parents[u]) < k and not any(v in desc[w] for w in children[u] if w != v):
                        cand.append(Move("reverse", u, v))
                elif v in parents[u] or len(parents[v]) >= k or u in desc[v]:
                    continue
                else:
                    cand = [Move("add", u, v)]
                for mv in cand:
                    if tabu is not None and mv in tabu:
                        continue
                    changed = {}
                    if mv.kind == "add":
                        changed[v] = sorted(parents[v] + [u])
                    else:
                        changed[v] = [p for p in parents[v] if p != u]
                        if mv.kind == "reverse":
                            changed[u] = sorted(parents[u] + [v])
                    delta = sum(local(w, ps) - node[w] for w, ps in changed.items())
                    new_pri = pri
                    if prior:
                        trial = list(parents)
                        for w, ps in changed.items():
                            trial[w] = ps
                        new_pri = prior(trial)
                        delta += new_pri - pri
                    if delta > best_delta:
                        best_delta, best_move, best_state = delta, mv, (changed, new_pri)
        if best_move is None:
            break
        changed, pri = best_state
        for w, ps in changed.items():
            parents[w] = ps
            node[w] = local(w, ps)
        if tabu is not None:
            kind, u, v = best_move
            inverse = {"add": Move("delete", u, v), "delete": Move("add", u, v), "reverse": Move("reverse", v, u)}
            tabu.append(inverse[kind])
    data_score = 0.0
    for v in range(n):
        data_score += node[v]
    return parents, data_score, pri


def _search(family, data, opts, cache, prior, start):
    n = len(data.variables)
    cache = cache or ScoreCache(family, data)
    cache.check(family, data)
    k = opts.indegree_for(n)

    def one(r):
        if r == 0:
            init = [list(p) for p in start.parents] if start is not None else [[] for _ in range(n)]
        else:
            init = _random_dag(n, k, restart_rng(opts.seed, r))
        parents, s, p = _climb(init, cache.local, k, opts.max_iters, opts.tabu_len, prior)
        dag = Dag(n, tuple(tuple(ps) for ps in parents))
        return dag, s, p

    best = best_run = None
    for dag, s, p in run_restarts(one, opts.restarts, opts.threads):
        key = (s + p,)
        if best_run is None or better(key, dag.edges(), best, best_run[0].edges()):
            best, best_run = key, (dag, s, p)
    return best_run


def hill_climb(
    family: ScoreFamily,
    data: DiscreteDataset,
    opts: SearchOptions = SearchOptions(),
    cache: ScoreCache | None = None,
    start: Dag | None = None,
) -> ClimbResult:
    """Best of ``opts.restarts`` greedy climbs.

    Restart 0 starts from ``start`` (the empty graph by default); the
    others start from random DAGs drawn from the (seed, restart) stream.
    """
    dag, s, _ = _search(family, data, opts, cache, None, start)
    return ClimbResult(dag, s)


def soft_search(
    family: ScoreFamily,
    data: DiscreteDataset,
    constraints: ConstraintSet,
    opts: SearchOptions = SearchOptions(),
    cache: ScoreCache | None = None,
) -> SoftResult:
    """Hill climbing on data score plus the constraint log-prior.

    A constraint ends up rejected exactly when the data penalty for
    honouring it outweighs its prior bonus ln(c) - ln(1 - c).
    """
    for c in constraints:
        if not 0.0 < c.confidence < 1.0:
            raise ConfidenceOutOfRange(f"soft search needs confidences in (0, 1), got {c.confidence}")
    prior = _Prior(constraints) if constraints else None
    cache = cache or ScoreCache(family, data)
    dag, _, _ = _search(family, data, opts, cache, prior, None)
    accepted = [c for c in constraints if is_satisfied(dag, c)]
    return SoftResult(dag, soft_score(family, dag, data, constraints, cache), accepted)

