import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from causalprior.constraints import Constraint, ConstraintSet, Kind, ancestral
from causalprior.datasets import FIXTURE_MODEL, fixture_dir, load_network, network_domain
from causalprior.errors import NonAncestralConstraint, SizeMismatch, UnknownSymbol
from causalprior.evaluate import (
    constraint_acceptance,
    edge_f1,
    format_json,
    format_text,
    metrics_dict,
    qualitative_accuracy,
    shd,
)
from causalprior.llm import ReplayClient, run_extraction
from causalprior.model import Dag, VariableTable, reachable

from .helpers import dags

ASIA = load_network("asia")
CANCER = load_network("cancer")


class TestShd:
    def test_identity(self):
        r = shd(ASIA.dag, ASIA.dag)
        assert (r.extra, r.missing, r.reversed, r.delta) == (0, 0, 0, 0)

    def test_two_extra_one_missing(self):
        truth = ASIA.dag
        edges = [e for e in truth.edges() if e != (0, 1)] + [(2, 7), (3, 6)]
        r = shd(Dag.from_edges(8, edges), truth)
        assert (r.extra, r.missing, r.reversed, r.delta) == (2, 1, 0, 3)

    def test_reversed_pair(self):
        r = shd(Dag.from_edges(2, [(1, 0)]), Dag.from_edges(2, [(0, 1)]))
        assert (r.extra, r.missing, r.reversed, r.delta) == (0, 0, 1, 1)

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatch):
            shd(Dag.empty(2), Dag.empty(3))

    @given(dags(), st.data())
    def test_symmetric(self, g, data):
        h = data.draw(dags(n=g.n))
        a, b = shd(g, h), shd(h, g)
        assert a.delta == b.delta and a.extra == b.missing and a.reversed == b.reversed


class TestF1:
    def test_identity(self):
        assert edge_f1(CANCER.dag, CANCER.dag).f1 == 1.0

    def test_half(self):
        truth = Dag.from_edges(4, [(0, 1), (2, 3)])
        learned = Dag.from_edges(4, [(0, 1), (1, 2)])
        assert edge_f1(learned, truth).f1 == pytest.approx(0.5)

    def test_empty_learned(self):
        r = edge_f1(Dag.empty(5), CANCER.dag)
        assert (r.precision, r.recall, r.f1) == (0.0, 0.0, 0.0)

    def test_reversal_counts_twice(self):
        r = edge_f1(Dag.from_edges(3, [(1, 0), (1, 2)]), Dag.from_edges(3, [(0, 1), (1, 2)]))
        assert (r.precision, r.recall) == (0.5, 0.5)

    @given(dags(), st.data())
    def test_one_iff_identical(self, g, data):
        h = data.draw(dags(n=g.n))
        f = edge_f1(g, h).f1
        assert (f == 1.0) == (g.edge_set() == h.edge_set() and bool(g.edge_set()))


class TestQualitative:
    def test_cancer_fixture_all_true(self):
        res = run_extraction(ReplayClient(fixture_dir("cancer"), FIXTURE_MODEL), network_domain("cancer"), CANCER.variables)
        assert qualitative_accuracy(res.statements, CANCER.dag, CANCER.variables) == (5, 5)

    def test_asia_fixture_all_true(self):
        res = run_extraction(ReplayClient(fixture_dir("asia"), FIXTURE_MODEL), network_domain("asia"), ASIA.variables)
        assert qualitative_accuracy(res.statements, ASIA.dag, ASIA.variables) == (9, 9)

    def test_reversed_edge_false(self):
        sym = CANCER.variables.symbols
        assert qualitative_accuracy([(sym[2], sym[0])], CANCER.dag, CANCER.variables) == (0, 1)

    def test_empty(self):
        assert qualitative_accuracy([], CANCER.dag, CANCER.variables) == (0, 0)

    def test_unknown(self):
        with pytest.raises(UnknownSymbol):
            qualitative_accuracy([("Smoker", "Age")], CANCER.dag, CANCER.variables)

    @given(dags(n=4), st.integers(0, 3), st.integers(0, 3))
    def test_monotone_in_truth(self, g, u, v):
        table = VariableTable.build([(f"v{i}", "ab") for i in range(4)])
        statements = [(f"v{a}", f"v{b}") for a in range(4) for b in range(4) if a != b]
        before = qualitative_accuracy(statements, g, table)[0]
        if u != v and not g.has_edge(u, v) and not reachable(g, v, u):
            bigger = Dag.from_edges(4, g.edges() + [(u, v)])
            assert qualitative_accuracy(statements, bigger, table)[0] >= before


class TestAcceptance:
    chain = Dag.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)])

    def test_all_correct_all_accepted(self):
        cs = ConstraintSet(tuple(ancestral(i, i + 1) for i in range(5)))
        r = constraint_acceptance(self.chain, cs, self.chain)
        assert (r.precision, r.recall) == (1.0, 1.0)

    def test_three_of_five(self):
        cs = ConstraintSet(tuple(ancestral(i, i + 1) for i in range(5)))
        learned = Dag.from_edges(6, [(0, 1), (1, 2), (2, 3)])
        r = constraint_acceptance(learned, cs, self.chain)
        assert (r.precision, r.recall) == (1.0, 0.6)

    def test_one_wrong_accepted(self):
        cs = ConstraintSet((ancestral(0, 1), ancestral(5, 0)))
        learned = Dag.from_edges(6, [(5, 0), (0, 1)])
        assert constraint_acceptance(learned, cs, self.chain).precision == 0.5

    def test_nothing_accepted_is_undefined(self):
        cs = ConstraintSet((ancestral(0, 1),))
        r = constraint_acceptance(Dag.empty(6), cs, self.chain)
        assert r.precision is None and r.recall == 0.0
        assert "precision: undefined" in format_text({"constraints": {"precision": r.precision}})

    def test_non_ancestral(self):
        with pytest.raises(NonAncestralConstraint):
            constraint_acceptance(self.chain, ConstraintSet((Constraint(Kind.EDGE, 0, 1),)), self.chain)


def test_report_formats():
    rep = metrics_dict(Dag.from_edges(5, [(0, 2)]), CANCER.dag)
    assert rep["shd"]["delta"] == 3
    assert json.loads(format_json(rep)) == rep
    assert "shd.missing: 3" in format_text(rep)
