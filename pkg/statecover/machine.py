"""Statechart well-formedness, hierarchy flattening and transition lookups."""

from collections import Counter
from typing import Dict, List, Optional, Sequence, Set, Tuple

import networkx as nx
import structlog

from .exceptions import OrthogonalRegionUnsupported, SemanticError, SuiteInconsistent, UnknownState
from .guards import And, GuardExpr, Not, render_guard
from .interpreter import run
from .models import SENTINELS, State, Statechart, StateKind, TestCase, Transition, Violation, natural_key

logger = structlog.get_logger(__name__)


def _structural_violations(sc: Statechart) -> List[Violation]:
    violations: List[Violation] = []
    states = sc.state_map()

    for state_id, count in sorted(Counter(s.id for s in sc.states).items(), key=lambda i: natural_key(i[0])):
        if count > 1:
            violations.append(Violation(code="duplicate-state", subject=state_id, message="declared more than once"))
    for transition_id, count in sorted(
        Counter(t.id for t in sc.transitions).items(), key=lambda i: natural_key(i[0])
    ):
        if count > 1:
            violations.append(
                Violation(code="duplicate-transition", subject=transition_id, message="declared more than once")
            )
    for transition in sc.transitions:
        if transition.id in SENTINELS:
            violations.append(
                Violation(code="reserved-id", subject=transition.id, message="ti and tf name graph sentinels")
            )

    for state in sc.states:
        if state.parent is not None and state.parent not in states:
            violations.append(Violation(code="unknown-parent", subject=state.id, message=f"parent {state.parent}"))
    for state in sc.states:
        seen = {state.id}
        parent = state.parent
        while parent is not None and parent in states:
            if parent in seen:
                violations.append(Violation(code="hierarchy-cycle", subject=state.id, message="state is its own ancestor"))
                break
            seen.add(parent)
            parent = states[parent].parent

    for state in sc.states:
        children = sc.children(state.id)
        if state.kind is StateKind.COMPOSITE:
            if not children:
                violations.append(Violation(code="composite-without-children", subject=state.id))
            entries = [c.id for c in children if c.is_entry]
            if children and not entries:
                violations.append(Violation(code="missing-entry", subject=state.id, message="no default entry child"))
            elif len(entries) > 1:
                violations.append(
                    Violation(code="orthogonal-region", subject=state.id, message="several entry children")
                )
        elif children:
            violations.append(Violation(code="simple-with-children", subject=state.id))
        if state.is_entry and state.parent is None:
            violations.append(Violation(code="entry-without-parent", subject=state.id))
        if state.is_initial and state.parent is not None:
            violations.append(Violation(code="nested-initial", subject=state.id, message="initial must be top level"))

    top_initial = [s for s in sc.states if s.is_initial and s.parent is None]
    if not top_initial:
        violations.append(Violation(code="missing-initial", message="no initial state"))
    elif len(top_initial) > 1:
        violations.append(
            Violation(code="multiple-initial", message=", ".join(s.id for s in top_initial))
        )
    if not sc.final_states:
        violations.append(Violation(code="no-final", message="no final state"))

    events = set(sc.events)
    variables = set(sc.variables)
    for transition in sc.transitions:
        for end in (transition.source, transition.target):
            if end not in states:
                violations.append(Violation(code="unknown-state", subject=transition.id, message=end))
        if transition.event not in events:
            violations.append(Violation(code="unknown-event", subject=transition.id, message=transition.event))
        guard = transition.guard_expr
        if guard is not None:
            for name in sorted(guard.variables() - variables):
                violations.append(Violation(code="unknown-variable", subject=transition.id, message=name))
    return violations


def state_graph(sc: Statechart) -> nx.DiGraph:
    """Directed graph over the states of a flat chart, one edge per source/target pair."""
    graph = nx.DiGraph()
    graph.add_nodes_from(s.id for s in sc.states)
    graph.add_edges_from((t.source, t.target) for t in sc.transitions)
    return graph


def validate(sc: Statechart) -> List[Violation]:
    """Return every broken well-formedness rule; an empty list means valid.

    Reachability (every simple state reachable from the initial state) and
    co-reachability (every simple state reaches a final state) are only
    checked once the structural rules hold, because they need a flattened
    chart with a single initial state.
    """
    violations = _structural_violations(sc)
    if violations:
        return violations
    if not sc.is_flat:
        violations = _copy_collisions(_flat_transitions(sc, sc.state_map()))
        if violations:
            return violations

    flat = flatten(sc)
    graph = state_graph(flat)
    initial = flat.initial_state().id
    reachable = nx.descendants(graph, initial) | {initial}
    finals = {s.id for s in flat.final_states}
    coreachable: Set[str] = set(finals)
    for final in finals:
        coreachable |= nx.ancestors(graph, final)

    for state in flat.states:
        if state.id not in reachable:
            violations.append(Violation(code="unreachable", subject=state.id, message="not reachable from initial"))
        if state.id not in coreachable:
            violations.append(Violation(code="cannot-reach-final", subject=state.id, message="no path to a final state"))
    logger.debug("Validated statechart", model=sc.name, violations=len(violations))
    return violations


def _ancestors(states: Dict[str, State], state_id: str) -> List[str]:
    """State id followed by its ancestors, nearest first."""
    chain = [state_id]
    parent = states[state_id].parent
    while parent is not None and parent not in chain:
        chain.append(parent)
        parent = states[parent].parent
    return chain


def _entry_leaf(sc: Statechart, states: Dict[str, State], state_id: str) -> str:
    current = state_id
    while states[current].kind is StateKind.COMPOSITE:
        entries = sorted((c.id for c in sc.children(current) if c.is_entry), key=natural_key)
        if len(entries) > 1:
            raise OrthogonalRegionUnsupported(current, entries)
        if not entries:
            raise UnknownState(f"{current}.<entry>")
        current = entries[0]
    return current


def _leaves(sc: Statechart, states: Dict[str, State], state_id: str) -> List[str]:
    if states[state_id].kind is StateKind.SIMPLE:
        return [state_id]
    leaves: List[str] = []
    for child in sc.children(state_id):
        leaves.extend(_leaves(sc, states, child.id))
    return sorted(leaves, key=natural_key)


def _masked_guard(transition: Transition, nearer: List[Transition]) -> Optional[str]:
    """Guard of a composite transition copied below states that handle the same event.

    The copy fires only when its own guard holds and every nearer handler's
    guard is false.
    """
    parts: List[GuardExpr] = []
    if transition.guard_expr is not None:
        parts.append(transition.guard_expr)
    parts.extend(Not(t.guard_expr) for t in nearer if t.guard_expr is not None)
    if not parts:
        return None
    combined = parts[0]
    for part in parts[1:]:
        combined = And(combined, part)
    return render_guard(combined)


def _flat_transitions(sc: Statechart, states: Dict[str, State]) -> List[Transition]:
    transitions: List[Transition] = []
    for transition in sc.transitions:
        target = _entry_leaf(sc, states, transition.target)
        sources = _leaves(sc, states, transition.source)
        for leaf in sources:
            chain = _ancestors(states, leaf)
            nearer_states = set(chain[: chain.index(transition.source)])
            nearer = [t for t in sc.transitions if t.source in nearer_states and t.event == transition.event]
            if any(t.guard is None for t in nearer):
                continue
            transitions.append(
                transition.model_copy(
                    update={
                        "id": transition.id if len(sources) == 1 else f"{transition.id}.{leaf}",
                        "source": leaf,
                        "target": target,
                        "guard": _masked_guard(transition, nearer),
                    }
                )
            )
    return transitions


def _copy_collisions(transitions: List[Transition]) -> List[Violation]:
    return [
        Violation(code="duplicate-transition", subject=transition_id, message="flattened copy reuses a declared id")
        for transition_id, count in sorted(
            Counter(t.id for t in transitions).items(), key=lambda i: natural_key(i[0])
        )
        if count > 1
    ]


def flatten(sc: Statechart) -> Statechart:
    """Replace the hierarchy by an equivalent chart over simple states only.

    A transition leaving a composite state is copied onto every simple
    descendant (ids become ``<transition>.<leaf>``). The copy is dropped when
    a nearer state on the way up has an unguarded transition on the same
    event; guarded nearer handlers are folded into the copy's guard as
    ``not (<guard>)`` terms. A transition entering a composite state enters
    its default-entry descendant. Final composite states make their
    descendants final.

    Raises:
        OrthogonalRegionUnsupported: If a composite declares several entry children
        SemanticError: If a copy id collides with a declared transition id
    """
    if sc.is_flat:
        return sc

    states = sc.state_map()
    for state in sc.states:
        if state.kind is StateKind.COMPOSITE:
            entries = sorted((c.id for c in sc.children(state.id) if c.is_entry), key=natural_key)
            if len(entries) > 1:
                raise OrthogonalRegionUnsupported(state.id, entries)

    initial_leaf: Optional[str] = None
    top_initial = [s for s in sc.states if s.is_initial and s.parent is None]
    if top_initial:
        initial_leaf = _entry_leaf(sc, states, top_initial[0].id)

    simple_states = []
    for state in sc.states:
        if state.kind is not StateKind.SIMPLE:
            continue
        chain = _ancestors(states, state.id)
        simple_states.append(
            State(
                id=state.id,
                kind=StateKind.SIMPLE,
                is_initial=state.id == initial_leaf,
                is_final=any(states[s].is_final for s in chain),
            )
        )

    transitions = _flat_transitions(sc, states)
    collisions = _copy_collisions(transitions)
    if collisions:
        raise SemanticError(
            f"Flattened transition id '{collisions[0].subject}' is already declared",
            code="duplicate-transition",
        )

    flat = Statechart(
        name=sc.name,
        events=sc.events,
        variables=sc.variables,
        states=tuple(simple_states),
        transitions=tuple(transitions),
    )
    logger.debug(
        "Flattened statechart",
        model=sc.name,
        states=len(flat.states),
        transitions=len(flat.transitions),
    )
    return flat


def _require_simple(sc: Statechart, state_id: str) -> State:
    state = sc.state(state_id)
    if state.kind is not StateKind.SIMPLE:
        raise UnknownState(state_id, context={"reason": "not a simple state"})
    return state


def in_set(sc: Statechart, state_id: str) -> Tuple[Transition, ...]:
    """Legal transitions entering a simple state, in id order."""
    _require_simple(sc, state_id)
    return tuple(t for t in sc.transitions if t.target == state_id)


def out_set(sc: Statechart, state_id: str) -> Tuple[Transition, ...]:
    """Legal transitions leaving a simple state, in id order."""
    _require_simple(sc, state_id)
    return tuple(t for t in sc.transitions if t.source == state_id)


def check_trace(sc: Statechart, case: TestCase) -> None:
    """Check that a test case chains through the model and replays to its stored traces.

    The inputs are run from the case's initial state; the visited states,
    fired transitions, outputs, verdict and ``complete`` flag must all match.

    Raises:
        SuiteInconsistent: If the case names unknown elements or disagrees with its replay
    """
    states = sc.state_map()
    transitions = sc.transition_map()
    for state_id in case.states:
        if state_id not in states:
            raise SuiteInconsistent(case.id, f"unknown state {state_id}")
    for index, transition_id in enumerate(case.transitions):
        transition = transitions.get(transition_id)
        if transition is None:
            raise SuiteInconsistent(case.id, f"unknown transition {transition_id}")
        if (transition.source, transition.target) != (case.states[index], case.states[index + 1]):
            raise SuiteInconsistent(
                case.id,
                f"{transition_id} does not lead from {case.states[index]} to {case.states[index + 1]}",
            )
    for event in (i.event for i in case.inputs):
        if event not in sc.events:
            raise SuiteInconsistent(case.id, f"unknown event {event}")

    try:
        trace = run(sc, case.initial_state, case.inputs)
    except SemanticError as e:
        raise SuiteInconsistent(case.id, f"replay failed: {e.message}") from None
    if trace.states != case.states or trace.transitions != case.transitions:
        raise SuiteInconsistent(case.id, f"replay fired {','.join(trace.transitions) or 'nothing'}")
    if trace.outputs != case.expected_outputs:
        raise SuiteInconsistent(case.id, f"replay emitted {','.join(trace.outputs) or 'nothing'}")
    if str(trace.verdict) != case.expected_verdict:
        raise SuiteInconsistent(case.id, f"replay verdict is {trace.verdict}")

    complete = (
        trace.verdict.accepted
        and case.initial_state == sc.initial_state().id
        and case.states[-1] in {s.id for s in sc.final_states}
    )
    if complete != case.complete:
        raise SuiteInconsistent(case.id, f"complete flag should be {str(complete).lower()}")


def check_suite(sc: Statechart, cases: Sequence[TestCase]) -> None:
    """Run :func:`check_trace` over every case."""
    for case in cases:
        check_trace(sc, case)
