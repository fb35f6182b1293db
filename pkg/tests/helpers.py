"""Shared builders for tests."""

import itertools

import numpy as np
from hypothesis import strategies as st

from causalprior.model import BayesNet, Dag, DiscreteDataset, VariableTable


def random_bn(n, seed, max_card=3, edge_p=0.5):
    """Random DAG over a random order with Dirichlet(1) CPT rows."""
    rng = np.random.default_rng(seed)
    cards = rng.integers(2, max_card + 1, size=n)
    table = VariableTable.build((f"v{i}", tuple(f"s{k}" for k in range(cards[i]))) for i in range(n))
    order = rng.permutation(n)
    edges = [(int(order[i]), int(order[j])) for i, j in itertools.combinations(range(n), 2) if rng.random() < edge_p]
    dag = Dag.from_edges(n, edges)
    cpts = []
    for v in range(n):
        q = int(np.prod(cards[list(dag.parents[v])])) if dag.parents[v] else 1
        cpts.append(rng.dirichlet(np.ones(cards[v]), size=q))
    return BayesNet(table, dag, tuple(cpts))


def random_dataset(n, N, seed, max_card=3):
    rng = np.random.default_rng(seed)
    cards = rng.integers(2, max_card + 1, size=n)
    table = VariableTable.build((f"v{i}", tuple(f"s{k}" for k in range(cards[i]))) for i in range(n))
    rows = np.column_stack([rng.integers(0, c, size=N) for c in cards])
    return DiscreteDataset(table, rows)


def binary_table(n, prefix="x"):
    return VariableTable.build((f"{prefix}{i}", ("a", "b")) for i in range(n))


@st.composite
def dags(draw, max_n=5, n=None):
    if n is None:
        n = draw(st.integers(1, max_n))
    order = draw(st.permutations(range(n)))
    edges = [
        (order[i], order[j])
        for i, j in itertools.combinations(range(n), 2)
        if draw(st.booleans())
    ]
    return Dag.from_edges(n, edges)
