import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causalprior.errors import CycleRejected, MissingEdge
from causalprior.model import Dag, Move, Variable, VariableTable, apply_move, is_acyclic, reachable

from .helpers import dags


def brute_reachable(dag, src, dst):
    # enumerate every simple path src -> ... -> dst through intermediate permutations
    others = [v for v in range(dag.n) if v not in (src, dst)]
    for k in range(len(others) + 1):
        for mid in itertools.permutations(others, k):
            path = (src, *mid, dst)
            if all(dag.has_edge(a, b) for a, b in zip(path, path[1:])):
                return True
    return False


class TestAcyclic:
    def test_empty(self):
        assert is_acyclic([(), (), ()], 3)

    def test_three_cycle(self):
        assert not is_acyclic([(2,), (0,), (1,)], 3)

    def test_dag(self):
        assert is_acyclic([(), (0,), (0, 1)], 3)

    def test_dag_constructor_rejects_cycles(self):
        with pytest.raises(CycleRejected):
            Dag.from_edges(2, [(0, 1), (1, 0)])

    def test_dag_rejects_self_parent_and_bad_index(self):
        with pytest.raises(ValueError):
            Dag(2, ((0,), ()))
        with pytest.raises(ValueError):
            Dag(2, ((5,), ()))


class TestReachable:
    chain = Dag.from_edges(3, [(0, 1), (1, 2)])

    def test_transitive_path(self):
        assert reachable(self.chain, 0, 2)

    def test_no_reverse_path(self):
        assert not reachable(self.chain, 2, 0)

    @given(dags())
    def test_self_never_reachable(self, dag):
        assert not any(reachable(dag, v, v) for v in range(dag.n))

    @given(dags())
    @settings(max_examples=200)
    def test_matches_path_enumeration(self, dag):
        for a in range(dag.n):
            for b in range(dag.n):
                if a != b:
                    assert reachable(dag, a, b) == brute_reachable(dag, a, b)

    @given(dags())
    def test_transitivity(self, dag):
        r = [[reachable(dag, a, b) for b in range(dag.n)] for a in range(dag.n)]
        for a, b, c in itertools.product(range(dag.n), repeat=3):
            if r[a][b] and r[b][c]:
                assert r[a][c]


class TestApplyMove:
    def test_add(self):
        assert apply_move(Dag.empty(2), Move("add", 0, 1)) == Dag.from_edges(2, [(0, 1)])

    def test_add_cycle_rejected(self):
        with pytest.raises(CycleRejected):
            apply_move(Dag.from_edges(2, [(0, 1)]), Move("add", 1, 0))

    def test_reverse(self):
        assert apply_move(Dag.from_edges(2, [(0, 1)]), Move("reverse", 0, 1)) == Dag.from_edges(2, [(1, 0)])

    def test_reverse_that_closes_cycle(self):
        dag = Dag.from_edges(3, [(0, 1), (1, 2), (0, 2)])
        with pytest.raises(CycleRejected):
            apply_move(dag, Move("reverse", 0, 2))

    def test_delete_missing(self):
        with pytest.raises(MissingEdge):
            apply_move(Dag.empty(2), Move("delete", 0, 1))

    def test_value_semantics(self):
        dag = Dag.from_edges(2, [(0, 1)])
        apply_move(dag, Move("delete", 0, 1))
        assert dag.edges() == [(0, 1)]

    @given(st.integers(2, 6), st.lists(st.tuples(st.sampled_from(["add", "delete", "reverse"]),
                                                 st.integers(0, 5), st.integers(0, 5)), max_size=40))
    def test_random_move_sequences_stay_acyclic(self, n, moves):
        dag = Dag.empty(n)
        for kind, u, v in moves:
            u, v = u % n, v % n
            try:
                dag = apply_move(dag, Move(kind, u, v))
            except (CycleRejected, MissingEdge, ValueError):
                continue
            assert is_acyclic(dag.parents, dag.n)


class TestVariableTable:
    def test_labels_must_match_cardinality(self):
        with pytest.raises(ValueError):
            Variable(0, "a", 2, ("x",))

    def test_unique_symbols(self):
        with pytest.raises(ValueError):
            VariableTable.build([("a", "xy"), ("a", "xy")])

    def test_case_insensitive_lookup(self):
        t = VariableTable.build([("Smoker", ("T", "F"))])
        assert t.lookup("smoker") is None
        assert t.lookup("smoker", case_insensitive=True) == 0
