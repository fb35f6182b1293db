from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence, TypeVar

import numpy as np

from ..model import Dag

T = TypeVar("T")


@dataclass(frozen=True)
class SearchOptions:
    """Knobs shared by the searchers.

    ``max_indegree`` is clamped to ``n - 1`` at search time so one option
    object can drive networks of any size.
    """

    max_indegree: int = 4
    restarts: int = 10
    max_iters: int = 1000
    seed: int = 0
    tabu_len: int = 10
    threads: int = 1

    def __post_init__(self):
        if self.max_indegree < 0 or self.restarts < 1 or self.max_iters < 0 or self.tabu_len < 0:
            raise ValueError(f"invalid search options {self}")

    def indegree_for(self, n: int) -> int:
        return min(self.max_indegree, max(n - 1, 0))


class ExhaustiveResult(NamedTuple):
    dag: Dag
    score: float
    satisfied: int


class ClimbResult(NamedTuple):
    dag: Dag
    score: float


class HardResult(NamedTuple):
    dag: Dag
    score: float
    satisfied: int


class SoftResult(NamedTuple):
    dag: Dag
    score: float
    accepted: list


def restart_rng(seed: int, restart: int) -> np.random.Generator:
    """Independent stream per (seed, restart index)."""
    return np.random.default_rng([seed, restart])


def better(a: tuple, edges_a: Sequence, b: tuple | None, edges_b: Sequence | None) -> bool:
    """Lexicographic comparison: objective tuple higher wins, then smaller edge list."""
    if b is None:
        return True
    if a != b:
        return a > b
    return list(edges_a) < list(edges_b)


def run_restarts(fn: Callable[[int], T], restarts: int, threads: int) -> list[T]:
    """Run fn(r) for each restart index; results come back in index order."""
    if threads <= 1 or restarts == 1:
        return [fn(r) for r in range(restarts)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(restarts)))
