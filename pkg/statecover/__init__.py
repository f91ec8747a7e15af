"""statecover - test generation, minimization and coverage for statechart models."""

__version__ = "0.1.0"
__description__ = "Statechart-based test generation with k-transition and sneak-path coverage"

from .config import StatecoverConfig
from .generator import (
    derive_faulty_pairs,
    enumerate_sequences,
    generate_ftc_suite,
    generate_ktc_suite,
    solve_gtsp,
    start_sequence,
)
from .interpreter import eval_guard, run, step
from .machine import flatten, in_set, out_set, validate
from .metrics import coverage_report
from .minimizer import covering_set, greedy_reduce, minimize_suite
from .parser import parse_statechart, serialize_statechart
from .tgraph import augment, build_transition_graph, k_fold_transform, unexpandable_short_sequences

__all__ = [
    "StatecoverConfig",
    "augment",
    "build_transition_graph",
    "coverage_report",
    "covering_set",
    "derive_faulty_pairs",
    "enumerate_sequences",
    "eval_guard",
    "flatten",
    "generate_ftc_suite",
    "generate_ktc_suite",
    "greedy_reduce",
    "in_set",
    "k_fold_transform",
    "minimize_suite",
    "out_set",
    "parse_statechart",
    "run",
    "serialize_statechart",
    "solve_gtsp",
    "start_sequence",
    "step",
    "unexpandable_short_sequences",
    "validate",
]
