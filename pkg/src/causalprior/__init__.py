"""Causal structure learning from discrete data with LLM-derived ancestral constraints."""

from .constraints import Constraint, ConstraintSet, Kind, detect_conflicts, from_statements, infer_pruning, is_satisfied
from .evaluate import constraint_acceptance, edge_f1, qualitative_accuracy, shd
from .ingest import forward_sample, load_dataset, parse_bif, write_bif
from .model import BayesNet, Dag, DiscreteDataset, Move, Variable, VariableTable, apply_move, is_acyclic, reachable
from .score import ScoreCache, ScoreFamily, local_score, prior_score, soft_score, total_score
from .search import SearchOptions, best_dag_for_ordering, exhaustive_search, hard_search, hill_climb, soft_search

__version__ = "0.1.0"

__all__ = [
    "Constraint",
    "ConstraintSet",
    "Kind",
    "detect_conflicts",
    "from_statements",
    "infer_pruning",
    "is_satisfied",
    "constraint_acceptance",
    "edge_f1",
    "qualitative_accuracy",
    "shd",
    "forward_sample",
    "load_dataset",
    "parse_bif",
    "write_bif",
    "BayesNet",
    "Dag",
    "DiscreteDataset",
    "Move",
    "Variable",
    "VariableTable",
    "apply_move",
    "is_acyclic",
    "reachable",
    "ScoreCache",
    "ScoreFamily",
    "local_score",
    "prior_score",
    "soft_score",
    "total_score",
    "SearchOptions",
    "best_dag_for_ordering",
    "exhaustive_search",
    "hard_search",
    "hill_climb",
    "soft_search",
]
