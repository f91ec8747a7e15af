"""Coverage ratios of a suite against a statechart."""

from typing import Dict, List, Optional, Set, Tuple

import structlog

from .exceptions import InvalidBound, StatecoverError
from .interpreter import run
from .machine import check_suite, flatten
from .models import CoverageReport, DimensionCoverage, Statechart, TestSuite, Transition, natural_key, sequence_key

logger = structlog.get_logger(__name__)


def _split(universe: List[str], covered: Set[str]) -> DimensionCoverage:
    return DimensionCoverage(
        covered=tuple(e for e in universe if e in covered),
        uncovered=tuple(e for e in universe if e not in covered),
    )


def longest_simple_complete_path(sc: Statechart) -> int:
    """Transitions on the longest path from the initial state to a final state visiting no state twice.

    Returns 1 when no such path exists.
    """
    flat = flatten(sc)
    finals = {s.id for s in flat.final_states}
    outgoing: Dict[str, List[Transition]] = {s.id: [] for s in flat.states}
    for transition in flat.transitions:
        outgoing[transition.source].append(transition)

    longest = 0
    stack: List[Tuple[str, int, frozenset]] = [(flat.initial_state().id, 0, frozenset())]
    while stack:
        state, length, seen = stack.pop()
        seen = seen | {state}
        if state in finals and length > 0:
            longest = max(longest, length)
        for transition in outgoing[state]:
            if transition.target not in seen:
                stack.append((transition.target, length + 1, seen))
    return max(1, longest)


def complete_paths(sc: Statechart, path_bound: int) -> List[Tuple[str, ...]]:
    """Walks of 1..``path_bound`` transitions from the initial state ending in a final state.

    Raises:
        InvalidBound: If ``path_bound < 1``
    """
    if path_bound < 1:
        raise InvalidBound(path_bound)
    flat = flatten(sc)
    finals = {s.id for s in flat.final_states}
    outgoing: Dict[str, List[Transition]] = {s.id: [] for s in flat.states}
    for transition in flat.transitions:
        outgoing[transition.source].append(transition)

    paths: List[Tuple[str, ...]] = []
    frontier: List[Tuple[Tuple[str, ...], str]] = [((), flat.initial_state().id)]
    for _ in range(path_bound):
        frontier = [(walk + (t.id,), t.target) for walk, state in frontier for t in outgoing[state]]
        paths.extend(walk for walk, state in frontier if state in finals)
    return sorted(paths, key=lambda p: sequence_key(list(p)))


def coverage_report(sc: Statechart, suite: TestSuite, path_bound: Optional[int] = None) -> CoverageReport:
    """State, transition, path, action and condition coverage of a suite.

    Paths are complete walks of at most ``path_bound`` transitions (default:
    the longest simple complete path) that some accepted case runs in full
    from the initial state to a final state. A guard counts as covered once the suite's replays have
    seen it both true and false.

    Raises:
        InvalidBound: If ``path_bound < 1``
        SuiteInconsistent: If a case does not match the model
    """
    flat = flatten(sc)
    if path_bound is None:
        path_bound = longest_simple_complete_path(flat)
    elif path_bound < 1:
        raise InvalidBound(path_bound)
    check_suite(flat, suite.cases)

    visited_states = {s for case in suite.cases for s in case.states}
    fired = {t for case in suite.cases for t in case.transitions}
    transitions = flat.transition_map()

    actions = sorted({t.output for t in flat.transitions}, key=natural_key)
    exercised_actions = {transitions[t].output for t in fired}

    universe = [",".join(p) for p in complete_paths(flat, path_bound)]
    run_paths = {",".join(case.transitions) for case in suite.cases if case.complete}

    guarded = [t.id for t in flat.transitions if t.guard is not None]
    outcomes: Dict[str, Set[bool]] = {t: set() for t in guarded}
    for case in suite.cases:
        try:
            trace = run(flat, case.initial_state, case.inputs)
        except StatecoverError as e:
            logger.warning("Skipping case in condition replay", case=case.id, error=str(e))
            continue
        for transition_id, value in trace.guard_outcomes:
            outcomes[transition_id].add(value)
    both = {t for t, seen in outcomes.items() if seen == {True, False}}

    report = CoverageReport(
        model_name=flat.name,
        suite_size=len(suite),
        path_bound=path_bound,
        states=_split([s.id for s in flat.states], visited_states),
        transitions=_split([t.id for t in flat.transitions], fired),
        paths=_split(universe, run_paths),
        actions=_split(actions, exercised_actions),
        conditions=_split(guarded, both),
    )
    logger.info(
        "Computed coverage",
        model=flat.name,
        suite_size=len(suite),
        state_cov=report.state_cov,
        transition_cov=report.transition_cov,
    )
    return report
