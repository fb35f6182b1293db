"""Ordering-based search and the hard-constraint searcher built on it.

For a fixed topological ordering the best DAG decomposes into independent
per-node parent-set choices among the node's predecessors, so each
ordering is solved exactly. Ancestral constraints prune the ordering
space (x ~> y forces x before y). Paths still missing after the per-node
optimisation are routed along their cheapest forward edges, and the
result seeds a branch and bound over parent sets that maximises
(satisfied count, score) within the ordering.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from ..constraints import ConstraintSet, Kind, count_satisfied, detect_conflicts, forbidden_pairs, order_pairs
from ..errors import ConflictingConstraints
from ..model import Dag, DiscreteDataset
from ..score import ScoreCache, ScoreFamily
from .options import HardResult, SearchOptions, better, restart_rng, run_restarts


def ordering_allowed(ordering: Sequence[int], pairs) -> bool:
    """False iff some required (before, after) pair appears reversed."""
    pos = {v: i for i, v in enumerate(ordering)}
    return all(pos[a] < pos[b] for a, b in pairs)


class _OrderingSolver:
    def __init__(self, cache: ScoreCache, n: int, k: int, forbidden=frozenset()):
        self.cache = cache
        self.n = n
        self.k = k
        self.banned = [frozenset(u for u, w in forbidden if w == v) for v in range(n)]
        self._memo: dict[tuple[int, frozenset], tuple[tuple[int, ...], float]] = {}
        self._ranked: dict[tuple[int, frozenset], list[tuple[float, tuple[int, ...]]]] = {}

    def ranked(self, v: int, preds: frozenset) -> list[tuple[float, tuple[int, ...]]]:
        """All admissible parent sets of v among preds, best local score first."""
        key = (v, preds)
        hit = self._ranked.get(key)
        if hit is None:
            cands = sorted(preds - self.banned[v])
            hit = [
                (self.cache.local(v, ps), ps)
                for size in range(min(self.k, len(cands)) + 1)
                for ps in itertools.combinations(cands, size)
            ]
            hit.sort(key=lambda t: -t[0])
            self._ranked[key] = hit
        return hit

    def best_parents(self, v: int, preds: frozenset) -> tuple[tuple[int, ...], float]:
        key = (v, preds)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        cands = sorted(preds - self.banned[v])
        best_ps, best_s = (), self.cache.local(v, ())
        for size in range(1, min(self.k, len(cands)) + 1):
            for ps in itertools.combinations(cands, size):
                s = self.cache.local(v, ps)
                if s > best_s:
                    best_ps, best_s = ps, s
        self._memo[key] = (best_ps, best_s)
        return best_ps, best_s

    def solve(self, ordering: Sequence[int]) -> list[tuple[int, ...]]:
        parents = [()] * self.n
        seen: set[int] = set()
        for v in ordering:
            parents[v] = self.best_parents(v, frozenset(seen))[0]
            seen.add(v)
        return parents


def best_dag_for_ordering(
    family: ScoreFamily,
    data: DiscreteDataset,
    ordering: Sequence[int],
    max_indegree: int,
    cache: ScoreCache | None = None,
) -> tuple[Dag, float]:
    n = len(data.variables)
    if sorted(ordering) != list(range(n)):
        raise ValueError("ordering must be a permutation of the node indices")
    cache = cache or ScoreCache(family, data)
    cache.check(family, data)
    solver = _OrderingSolver(cache, n, min(max_indegree, max(n - 1, 0)))
    parents = solver.solve(ordering)
    score = 0.0
    for v in range(n):
        score += cache.local(v, parents[v])
    return Dag(n, tuple(parents)), score


def _descendants(children, src):
    seen = set()
    stack = list(children[src])
    while stack:
        u = stack.pop()
        if u not in seen:
            seen.add(u)
            stack.extend(children[u])
    return seen


def _forward_path(parents, ordering, src, dst, forbidden, local):
    """Highest-gain forward route src ~> dst; existing edges are free, new ones cost their score delta."""
    pos = {v: i for i, v in enumerate(ordering)}
    gain = {src: 0.0}
    back = {}
    for v in ordering[pos[src] + 1: pos[dst] + 1]:
        base = None
        for u in ordering[pos[src]: pos[v]]:
            if u not in gain or (u, v) in forbidden:
                continue
            step = 0.0 if u in parents[v] else local(v, sorted(parents[v] + [u])) - local(v, parents[v])
            if base is None or gain[u] + step > base:
                base, back[v] = gain[u] + step, u
        if base is not None:
            gain[v] = base
    if dst not in gain:
        return None
    edges = []
    v = dst
    while v != src:
        u = back[v]
        if u not in parents[v]:
            edges.append((u, v))
        v = u
    return edges


def repair_paths(parents, ordering, constraints: ConstraintSet, forbidden, local):
    """Route each missing required edge or path along its cheapest forward edges, to a fixpoint.

    Only edges that go forward in ``ordering`` are added, so the graph
    stays acyclic and consistent with every order constraint.
    """
    parents = [list(p) for p in parents]
    pos = {v: i for i, v in enumerate(ordering)}
    n = len(parents)
    for c in constraints.of_kind(Kind.EDGE):
        if c.src not in parents[c.dst] and pos[c.src] < pos[c.dst]:
            parents[c.dst] = sorted(parents[c.dst] + [c.src])
    pending = constraints.of_kind(Kind.ANCESTRAL)
    while True:
        children = [[] for _ in range(n)]
        for v in range(n):
            for u in parents[v]:
                children[u].append(v)
        missing = next((c for c in pending if c.dst not in _descendants(children, c.src)), None)
        if missing is None:
            break
        route = None
        if pos[missing.src] < pos[missing.dst]:
            route = _forward_path(parents, ordering, missing.src, missing.dst, forbidden, local)
        if not route:
            # unreachable under this ordering; leave it unsatisfied
            pending = [x for x in pending if x is not missing]
            continue
        for u, v in route:
            parents[v] = sorted(parents[v] + [u])
    return [tuple(p) for p in parents]


def polish(parents, ordering, constraints: ConstraintSet, forbidden, local, k):
    """Coordinate ascent on (satisfied count, score), one node's parent set at a time.

    Candidate sets are drawn from the node's predecessors in ``ordering``;
    a replacement is taken only if it does not lose a satisfied constraint
    and strictly improves the lexicographic objective.
    """
    n = len(parents)
    parents = [tuple(p) for p in parents]
    pos = {v: i for i, v in enumerate(ordering)}
    count = count_satisfied(Dag(n, tuple(parents)), constraints)
    improved = True
    while improved:
        improved = False
        for v in ordering:
            preds = [u for u in ordering[: pos[v]] if (u, v) not in forbidden]
            cur = (count, local(v, parents[v]))
            best = None
            for size in range(0, min(k, len(preds)) + 1):
                for ps in itertools.combinations(sorted(preds), size):
                    if ps == parents[v]:
                        continue
                    s = local(v, ps)
                    trial = list(parents)
                    trial[v] = ps
                    sat = count_satisfied(Dag(n, tuple(trial)), constraints)
                    key = (sat, s)
                    if key > cur and (best is None or key > best[0]):
                        best = (key, ps)
            if best is not None:
                (count, _), parents[v] = best
                improved = True
    return parents


def refine(solver: _OrderingSolver, ordering, constraints: ConstraintSet, incumbent, budget: int = 200_000):
    """Branch and bound over parent-set choices for one ordering.

    Nodes are assigned in ordering position, so reachability among the
    assigned prefix is final and a constraint is decided as soon as both
    of its endpoints are placed. Returns the best (key, parents) found,
    starting from ``incumbent``; ``budget`` caps the nodes expanded.
    """
    n = len(ordering)
    pos = {v: i for i, v in enumerate(ordering)}
    lists = [solver.ranked(v, frozenset(ordering[:i])) for i, v in enumerate(ordering)]
    rest = [0.0] * (n + 1)
    for i in range(n - 1, -1, -1):
        rest[i] = rest[i + 1] + lists[i][0][0]
    decided = [[] for _ in range(n)]
    open_after = [0] * (n + 1)
    for c in constraints:
        i = max(pos[c.src], pos[c.dst])
        decided[i].append(c)
        if c.kind is not Kind.ANCESTRAL or pos[c.src] < pos[c.dst]:
            for j in range(i + 1):
                open_after[j] += 1
    best = [incumbent[0], list(incumbent[1])]
    parents = [()] * n
    anc = [frozenset()] * n
    left = [budget]

    def holds(c):
        if c.kind is Kind.ANCESTRAL:
            return c.src in anc[c.dst]
        if c.kind is Kind.ORDER:
            return c.dst not in anc[c.src]
        if c.kind is Kind.EDGE:
            return c.src in parents[c.dst]
        return c.src not in parents[c.dst]

    def dfs(i, sat, score):
        if i == n:
            if (sat, score) > best[0]:
                best[0], best[1] = (sat, score), list(parents)
            return
        v = ordering[i]
        for s, ps in lists[i]:
            if left[0] <= 0 or not (sat + open_after[i], score + s + rest[i + 1]) > best[0]:
                return
            left[0] -= 1
            parents[v] = ps
            anc[v] = frozenset().union(*(anc[p] | {p} for p in ps)) if ps else frozenset()
            dfs(i + 1, sat + sum(holds(c) for c in decided[i]), score + s)
        parents[v] = ()

    dfs(0, 0, 0.0)
    return best[0], [tuple(p) for p in best[1]]


def random_linear_extension(n: int, pairs, rng) -> list[int]:
    """Uniformly pick among currently unconstrained nodes until all are placed."""
    preds = {v: set() for v in range(n)}
    for a, b in pairs:
        preds[b].add(a)
    placed: list[int] = []
    done: set[int] = set()
    while len(placed) < n:
        ready = [v for v in range(n) if v not in done and preds[v] <= done]
        v = ready[int(rng.integers(len(ready)))]
        placed.append(v)
        done.add(v)
    return placed


def _sum_local(cache, parents):
    score = 0.0
    for v in range(len(parents)):
        score += cache.local(v, parents[v])
    return score


def hard_search(
    family: ScoreFamily,
    data: DiscreteDataset,
    constraints: ConstraintSet | None = None,
    opts: SearchOptions = SearchOptions(),
    cache: ScoreCache | None = None,
) -> HardResult:
    """Maximise the number of satisfied constraints, then the data score.

    Local search over orderings by adjacent transpositions, restarted from
    random linear extensions of the inferred order constraints.
    """
    constraints = constraints or ConstraintSet()
    n = len(data.variables)
    report = detect_conflicts(constraints, n)
    if not report.ok:
        raise ConflictingConstraints(report)
    cache = cache or ScoreCache(family, data)
    cache.check(family, data)
    pairs = order_pairs(constraints)
    forbidden = frozenset(forbidden_pairs(constraints))
    k = opts.indegree_for(n)
    solver = _OrderingSolver(cache, n, k, forbidden)

    def evaluate(ordering):
        parents = repair_paths(solver.solve(ordering), ordering, constraints, forbidden, cache.local)
        if constraints:
            parents = polish(parents, ordering, constraints, forbidden, cache.local, k)
        key = (count_satisfied(Dag(n, tuple(parents)), constraints), _sum_local(cache, parents))
        if constraints:
            key, parents = refine(solver, ordering, constraints, (key, parents))
            key = (key[0], _sum_local(cache, parents))
        return key, Dag(n, tuple(parents))

    def one(r):
        ordering = random_linear_extension(n, pairs, restart_rng(opts.seed, r))
        key, dag = evaluate(ordering)
        for _ in range(opts.max_iters):
            step = None
            for i in range(n - 1):
                a, b = ordering[i], ordering[i + 1]
                if (a, b) in pairs:
                    continue
                cand = ordering[:i] + [b, a] + ordering[i + 2:]
                ckey, cdag = evaluate(cand)
                if step is None or better(ckey, cdag.edges(), step[0], step[1].edges()):
                    step = (ckey, cdag, cand)
            if step is None or not step[0] > key:
                break
            key, dag, ordering = step
        return key, dag

    best = best_dag = None
    for key, dag in run_restarts(one, opts.restarts, opts.threads):
        if best is None or better(key, dag.edges(), best, best_dag.edges()):
            best, best_dag = key, dag
    return HardResult(best_dag, best[1], best[0])
