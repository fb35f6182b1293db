from .exhaustive import all_dags, exhaustive_search
from .hillclimb import hill_climb, soft_search
from .options import ClimbResult, ExhaustiveResult, HardResult, SearchOptions, SoftResult
from .ordering import best_dag_for_ordering, hard_search, ordering_allowed

__all__ = [
    "SearchOptions",
    "ExhaustiveResult",
    "ClimbResult",
    "HardResult",
    "SoftResult",
    "all_dags",
    "exhaustive_search",
    "hill_climb",
    "soft_search",
    "best_dag_for_ordering",
    "hard_search",
    "ordering_allowed",
]
