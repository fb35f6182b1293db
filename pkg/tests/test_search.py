import itertools

import numpy as np
import pytest

from causalprior.constraints import Constraint, ConstraintSet, Kind, ancestral, count_satisfied, order_pairs
from causalprior.errors import ConfidenceOutOfRange, ConflictingConstraints, TooLarge
from causalprior.evaluate import constraint_acceptance
from causalprior.ingest import forward_sample
from causalprior.model import BayesNet, Dag, DiscreteDataset, Move, apply_move, reachable
from causalprior.score import ScoreCache, ScoreFamily, total_score
from causalprior.search import (
    SearchOptions,
    all_dags,
    best_dag_for_ordering,
    exhaustive_search,
    hard_search,
    hill_climb,
    ordering_allowed,
    soft_search,
)

from .helpers import binary_table, random_dataset

BIC = ScoreFamily("BIC")
BDEU = ScoreFamily("BDeu", 1.0)


def correlated_pair(N=200):
    rows = np.array([[i % 2, i % 2] for i in range(N)])
    return DiscreteDataset(binary_table(2), rows)


def chain_data(N, seed):
    dag = Dag.from_edges(3, [(0, 1), (1, 2)])
    strong = np.array([[0.9, 0.1], [0.1, 0.9]])
    cpts = (np.array([[0.5, 0.5]]), strong, strong)
    bn = BayesNet(binary_table(3), dag, cpts)
    return bn, forward_sample(bn, N, seed)


class TestEnumeration:
    @pytest.mark.parametrize("n,count", [(1, 1), (2, 3), (3, 25), (4, 543)])
    def test_dag_counts(self, n, count):
        assert len(all_dags(n)) == count

    def test_too_large(self):
        with pytest.raises(TooLarge):
            all_dags(6)
        with pytest.raises(TooLarge):
            exhaustive_search(BIC, random_dataset(6, 10, 0))


class TestExhaustive:
    def test_correlated_pair(self):
        res = exhaustive_search(BDEU, correlated_pair())
        assert res.dag.edges() == [(0, 1)]

    def test_independent_pair(self):
        rows = np.array([[a, b] for a in range(2) for b in range(2)] * 50)
        res = exhaustive_search(BIC, DiscreteDataset(binary_table(2), rows))
        assert res.dag.num_edges() == 0

    def test_constraint_creates_path(self):
        rows = np.array([[a, b] for a in range(2) for b in range(2)] * 50)
        cs = ConstraintSet((ancestral(1, 0),))
        res = exhaustive_search(BIC, DiscreteDataset(binary_table(2), rows), cs)
        assert res.satisfied == 1 and reachable(res.dag, 1, 0)

    def test_score_is_optimum(self):
        d = random_dataset(3, 80, 2)
        res = exhaustive_search(BIC, d)
        best = max(total_score(BIC, Dag(3, p), d) for p in all_dags(3))
        assert res.score == best


class TestHillClimb:
    @pytest.mark.parametrize("seed", range(3))
    def test_matches_exhaustive_on_chain(self, seed):
        _, d = chain_data(2000, seed)
        ex = exhaustive_search(BIC, d)
        hc = hill_climb(BIC, d, SearchOptions(restarts=5, seed=seed))
        assert hc.score == pytest.approx(ex.score, abs=1e-9)

    def test_zero_iterations(self):
        _, d = chain_data(500, 0)
        assert hill_climb(BIC, d, SearchOptions(max_iters=0, restarts=1)).dag == Dag.empty(3)

    def test_local_optimum(self):
        d = random_dataset(4, 300, 9, max_card=2)
        res = hill_climb(BIC, d, SearchOptions(restarts=3, max_indegree=3))
        for u, v in itertools.permutations(range(4), 2):
            for kind in ("add", "delete", "reverse"):
                try:
                    nb = apply_move(res.dag, Move(kind, u, v))
                except Exception:
                    continue
                assert total_score(BIC, nb, d) <= res.score + 1e-9

    def test_indegree_bound(self):
        d = random_dataset(5, 300, 4, max_card=2)
        res = hill_climb(BIC, d, SearchOptions(max_indegree=1, restarts=3))
        assert all(len(p) <= 1 for p in res.dag.parents)

    def test_deterministic_and_thread_independent(self):
        d = random_dataset(5, 200, 5)
        a = hill_climb(BIC, d, SearchOptions(restarts=6, seed=3))
        b = hill_climb(BIC, d, SearchOptions(restarts=6, seed=3))
        c = hill_climb(BIC, d, SearchOptions(restarts=6, seed=3, threads=4))
        assert a == b == c

    def test_shared_cache_same_result(self):
        d = random_dataset(4, 200, 6)
        cache = ScoreCache(BDEU, d)
        assert hill_climb(BDEU, d, cache=cache) == hill_climb(BDEU, d)


class TestOrdering:
    def test_forward_ordering(self):
        dag, s = best_dag_for_ordering(BDEU, correlated_pair(), [0, 1], 4)
        assert dag.edges() == [(0, 1)]
        dag2, s2 = best_dag_for_ordering(BDEU, correlated_pair(), [1, 0], 4)
        assert dag2.edges() == [(1, 0)]
        assert s == pytest.approx(s2, abs=1e-9)

    def test_zero_indegree(self):
        dag, _ = best_dag_for_ordering(BIC, correlated_pair(), [0, 1], 0)
        assert dag.num_edges() == 0

    def test_respects_ordering(self):
        d = random_dataset(5, 300, 8, max_card=2)
        order = [3, 1, 4, 0, 2]
        dag, _ = best_dag_for_ordering(BIC, d, order, 4)
        pos = {v: i for i, v in enumerate(order)}
        assert all(pos[u] < pos[v] for u, v in dag.edges())

    def test_bad_ordering(self):
        with pytest.raises(ValueError):
            best_dag_for_ordering(BIC, correlated_pair(), [0, 0], 4)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_pruning_soundness(self, n):
        # every skipped ordering has some constrained pair reversed, and every
        # ordering it yields graphs for can place each ancestral path forward
        rng = np.random.default_rng(n)
        for _ in range(5):
            a, b = rng.choice(n, 2, replace=False)
            cs = ConstraintSet((ancestral(int(a), int(b)),))
            pairs = order_pairs(cs)
            for perm in itertools.permutations(range(n)):
                pos = {v: i for i, v in enumerate(perm)}
                if not ordering_allowed(perm, pairs):
                    assert any(pos[x] > pos[y] for x, y in pairs)
                    # any graph consistent with this ordering cannot contain x ~> y
                    assert pos[int(a)] > pos[int(b)]

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_pruning_keeps_all_satisfying_graphs(self, n):
        cs = ConstraintSet((ancestral(0, n - 1), ancestral(1, n - 1) if n > 2 else ancestral(0, 1)))
        pairs = order_pairs(cs)
        allowed = [p for p in itertools.permutations(range(n)) if ordering_allowed(p, pairs)]
        for parents in all_dags(n):
            dag = Dag(n, parents)
            if count_satisfied(dag, cs) == len(cs):
                assert any(all(p.index(u) < p.index(v) for u, v in dag.edges()) for p in allowed)


class TestHardSearch:
    def test_cancer_recall(self, cancer):
        d = forward_sample(cancer, 1000, 1)
        truth = cancer.dag
        cs = ConstraintSet(tuple(
            ancestral(u, v, 0.99999) for u, v in itertools.permutations(range(5), 2) if reachable(truth, u, v)
        ))
        res = hard_search(BDEU, d, cs, SearchOptions(restarts=5))
        assert res.satisfied == len(cs)
        assert constraint_acceptance(res.dag, cs, truth).recall == 1.0

    def test_empty_constraints(self):
        d = random_dataset(4, 200, 3)
        res = hard_search(BIC, d)
        assert res.satisfied == 0
        assert res.score == pytest.approx(exhaustive_search(BIC, d).score, abs=1e-9)

    def test_conflict(self):
        with pytest.raises(ConflictingConstraints):
            hard_search(BIC, random_dataset(3, 20, 0), ConstraintSet((ancestral(0, 1), ancestral(1, 0))))

    def test_forbidden_and_edge(self):
        _, d = chain_data(1000, 2)
        cs = ConstraintSet((Constraint(Kind.FORBIDDEN, 0, 1), Constraint(Kind.EDGE, 2, 0)))
        res = hard_search(BIC, d, cs)
        assert not res.dag.has_edge(0, 1) and res.dag.has_edge(2, 0)
        assert res.satisfied == 2

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_exhaustive_lexicographic(self, seed):
        d = random_dataset(4, 300, 20 + seed, max_card=2)
        rng = np.random.default_rng(seed)
        a, b, c = (int(x) for x in rng.choice(4, 3, replace=False))
        cs = ConstraintSet((ancestral(a, b), ancestral(b, c)))
        ex = exhaustive_search(BIC, d, cs)
        hs = hard_search(BIC, d, cs, SearchOptions(restarts=20))
        assert hs.satisfied == ex.satisfied
        assert hs.score == pytest.approx(ex.score, abs=1e-9)

    def test_deterministic(self):
        d = random_dataset(5, 200, 1)
        cs = ConstraintSet((ancestral(4, 0),))
        assert hard_search(BIC, d, cs, SearchOptions(seed=2)) == hard_search(BIC, d, cs, SearchOptions(seed=2, threads=3))


class TestSoftSearch:
    def test_correct_constraint_accepted(self, cancer):
        d = forward_sample(cancer, 1000, 3)
        c = ancestral(2, 3, 0.99999)  # cancer ~> xray
        res = soft_search(BDEU, d, ConstraintSet((c,)))
        assert res.accepted == [c]

    def test_erroneous_constraint(self):
        # collider truth: 0 -> 1 <- 2, 1 -> 3; claim 1 ~> 0 cannot be honoured for free
        dag = Dag.from_edges(4, [(0, 1), (2, 1), (1, 3)])
        cpts = (
            np.array([[0.5, 0.5]]),
            np.array([[0.9, 0.1], [0.5, 0.5], [0.5, 0.5], [0.1, 0.9]]),
            np.array([[0.5, 0.5]]),
            np.array([[0.85, 0.15], [0.15, 0.85]]),
        )
        d = forward_sample(BayesNet(binary_table(4), dag, cpts), 5000, 100)
        cs = ConstraintSet((ancestral(1, 0, 0.9),))
        assert soft_search(BDEU, d, cs).accepted == []
        assert hard_search(BDEU, d, cs).satisfied == 1

    def test_half_confidence_equals_plain(self):
        d = random_dataset(4, 300, 12, max_card=2)
        cs = ConstraintSet((ancestral(0, 3, 0.5), ancestral(2, 1, 0.5)))
        opts = SearchOptions(seed=4)
        assert soft_search(BIC, d, cs, opts).dag == hill_climb(BIC, d, opts).dag

    def test_confidence_one(self):
        with pytest.raises(ConfidenceOutOfRange):
            soft_search(BIC, random_dataset(2, 10, 0), ConstraintSet((ancestral(0, 1, 1.0),)))

    def test_score_reported(self):
        from causalprior.score import soft_score

        d = random_dataset(3, 100, 2)
        cs = ConstraintSet((ancestral(0, 2, 0.8),))
        res = soft_search(BIC, d, cs)
        assert res.score == soft_score(BIC, res.dag, d, cs)
