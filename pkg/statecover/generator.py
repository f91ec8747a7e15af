"""Test suite generation: sequence enumeration, k-transition coverage and sneak paths."""

import itertools
from collections import deque
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import structlog

from .exceptions import (
    EmptyGraph,
    GuardUnsatisfiable,
    InvalidParameter,
    NotStronglyConnected,
    SuiteInconsistent,
    SuiteTooLarge,
    UnreachableState,
)
from .interpreter import eval_guard, run
from .machine import flatten, in_set
from .models import (
    ENTRY,
    EXIT,
    CoveringWalk,
    FalseTransitionPair,
    FaultyPair,
    InputEvent,
    Statechart,
    SuiteProvenance,
    TestCase,
    TestSuite,
    Transition,
    TransitionGraph,
    Verdict,
    natural_key,
    sequence_key,
)
from .tgraph import (
    augment,
    build_transition_graph,
    disconnected_vertices,
    is_strongly_connected,
    k_fold_transform,
    to_networkx,
    unexpandable_short_sequences,
)

logger = structlog.get_logger(__name__)

DEFAULT_SUITE_CAP = 100000
DEFAULT_EXACT_LIMIT = 12


# -- Bindings -----------------------------------------------------------------


def _siblings(sc: Statechart, transition: Transition) -> List[Transition]:
    return [
        t
        for t in sc.transitions
        if t.source == transition.source and t.event == transition.event and t.id != transition.id
    ]


def choose_bindings(sc: Statechart, transition: Transition, wanted: bool = True) -> Dict[str, int]:
    """Pick integer bindings that drive the guard of ``transition`` to ``wanted``.

    Candidates are ``c - 1``, ``c`` and ``c + 1`` for every constant ``c`` of
    the guards on the same source and event, plus 0, tried in ascending
    order. Assignments that also keep every same-event sibling disabled are
    preferred; otherwise the first assignment giving ``wanted`` is used.

    Raises:
        GuardUnsatisfiable: If no candidate assignment gives ``wanted``
    """
    siblings = _siblings(sc, transition)
    guards = [g for g in (t.guard_expr for t in [transition, *siblings]) if g is not None]
    if not guards:
        if not wanted:
            raise GuardUnsatisfiable(transition.id, "true", wanted)
        return {}

    variables = sorted(set().union(*(g.variables() for g in guards)))
    constants = set().union(*(g.constants() for g in guards))
    candidates = sorted({0} | {c + d for c in constants for d in (-1, 0, 1)})

    fallback: Optional[Dict[str, int]] = None
    for values in itertools.product(candidates, repeat=len(variables)):
        env = dict(zip(variables, values))
        own = transition.guard_expr
        value = True if own is None else eval_guard(own, env)
        if value != wanted:
            continue
        if fallback is None:
            fallback = env
        if all(t.guard_expr is not None and not eval_guard(t.guard_expr, env) for t in siblings):
            return env
    if fallback is None:
        raise GuardUnsatisfiable(transition.id, transition.guard or "true", wanted)
    return fallback


def enabling_inputs(sc: Statechart, transitions: Iterable[Transition]) -> Tuple[InputEvent, ...]:
    """Inputs that fire ``transitions`` one after the other."""
    return tuple(InputEvent(event=t.event, bindings=choose_bindings(sc, t)) for t in transitions)


def _case(
    sc: Statechart,
    case_id: str,
    start: str,
    transitions: Sequence[Transition],
    extra: Sequence[InputEvent] = (),
    expect_rejection: bool = False,
) -> TestCase:
    """Build a test case by replaying its inputs on the interpreter."""
    inputs = enabling_inputs(sc, transitions) + tuple(extra)
    trace = run(sc, start, inputs)
    wanted_ids = tuple(t.id for t in transitions)

    if trace.transitions[: len(wanted_ids)] != wanted_ids:
        raise SuiteInconsistent(case_id, f"replay fired {','.join(trace.transitions)} instead of {','.join(wanted_ids)}")
    if expect_rejection and trace.verdict != Verdict.rejected_at(len(inputs)):
        raise SuiteInconsistent(case_id, f"expected rejection at step {len(inputs)}, got {trace.verdict}")

    initial = sc.initial_state().id
    finals = {s.id for s in sc.final_states}
    return TestCase(
        id=case_id,
        initial_state=start,
        inputs=inputs,
        expected_outputs=trace.outputs,
        states=trace.states,
        transitions=trace.transitions,
        complete=start == initial and trace.states[-1] in finals and trace.verdict.accepted,
        expected_verdict=str(trace.verdict),
    )


def _numbered(cases: List[Tuple[str, Sequence[Transition]]], sc: Statechart) -> List[TestCase]:
    return [_case(sc, f"tc{n}", start, seq) for n, (start, seq) in enumerate(cases, start=1)]


# -- Enumeration --------------------------------------------------------------


def enumerate_sequences(sc: Statechart, max_len: int, cap: int = DEFAULT_SUITE_CAP) -> TestSuite:
    """Every legal transition sequence of length 1..``max_len`` as a test case.

    Sequences are walks starting in any simple state. Cases are ordered by
    start state, then by transition ids.

    Raises:
        InvalidParameter: If ``max_len < 1``
        SuiteTooLarge: If more than ``cap`` sequences exist
    """
    if max_len < 1:
        raise InvalidParameter("max_len", max_len, "an integer >= 1")
    flat = flatten(sc)
    outgoing: Dict[str, List[Transition]] = {s.id: [] for s in flat.states}
    for transition in flat.transitions:
        outgoing[transition.source].append(transition)

    found: List[Tuple[Transition, ...]] = []
    frontier: List[Tuple[Transition, ...]] = [(t,) for t in flat.transitions]
    for length in range(1, max_len + 1):
        found.extend(frontier)
        if len(found) > cap:
            raise SuiteTooLarge(cap, "Sequence enumeration")
        if length == max_len or not frontier:
            break
        frontier = [walk + (nxt,) for walk in frontier for nxt in outgoing[walk[-1].target]]

    found.sort(key=lambda walk: (natural_key(walk[0].source), sequence_key([t.id for t in walk])))
    cases = _numbered([(walk[0].source, walk) for walk in found], flat)
    logger.info("Enumerated transition sequences", model=sc.name, max_len=max_len, cases=len(cases))
    return TestSuite(cases=tuple(cases), provenance=SuiteProvenance.ENUMERATED)


# -- Covering walks -----------------------------------------------------------


def _held_karp(order: List[str], dist: Dict[str, Dict[str, int]]) -> List[str]:
    """Shortest closed tour over ``order`` starting at ``order[0]``."""
    start, rest = order[0], order[1:]
    size = len(rest)
    best: Dict[Tuple[int, int], Tuple[int, int]] = {}
    for i, vertex in enumerate(rest):
        best[(1 << i, i)] = (dist[start][vertex], -1)

    for mask in range(1, 1 << size):
        for last in range(size):
            if (mask, last) not in best:
                continue
            cost, _ = best[(mask, last)]
            for nxt in range(size):
                if mask & (1 << nxt):
                    continue
                key = (mask | (1 << nxt), nxt)
                candidate = cost + dist[rest[last]][rest[nxt]]
                if key not in best or candidate < best[key][0]:
                    best[key] = (candidate, last)

    full = (1 << size) - 1
    last = min(range(size), key=lambda i: (best[(full, i)][0] + dist[rest[i]][start], i))
    tour: List[str] = []
    mask = full
    while last != -1:
        tour.append(rest[last])
        _, previous = best[(mask, last)]
        mask &= ~(1 << last)
        last = previous
    return [start] + tour[::-1]


def _tour_cost(tour: List[str], dist: Dict[str, Dict[str, int]]) -> int:
    return sum(dist[a][b] for a, b in zip(tour, tour[1:] + tour[:1]))


def _nearest_neighbour_two_opt(order: List[str], dist: Dict[str, Dict[str, int]]) -> List[str]:
    tour = [order[0]]
    unvisited = order[1:]
    while unvisited:
        current = tour[-1]
        nxt = min(unvisited, key=lambda v: dist[current][v])
        tour.append(nxt)
        unvisited.remove(nxt)

    # Directed costs change when a segment is reversed, so every candidate is re-priced.
    cost = _tour_cost(tour, dist)
    improved = True
    while improved:
        improved = False
        for i in range(1, len(tour) - 1):
            for j in range(i + 1, len(tour)):
                candidate = tour[:i] + tour[i : j + 1][::-1] + tour[j + 1 :]
                candidate_cost = _tour_cost(candidate, dist)
                if candidate_cost < cost:
                    tour, cost, improved = candidate, candidate_cost, True
    return tour


def solve_gtsp(tg: TransitionGraph, exact_limit: int = DEFAULT_EXACT_LIMIT) -> CoveringWalk:
    """Shortest walk from ``ti`` to ``tf`` visiting every vertex of an augmented graph.

    The tour is computed on the metric closure (all-pairs shortest path
    lengths), exactly for graphs of at most ``exact_limit`` vertices and
    by nearest neighbour plus 2-opt otherwise, then expanded back through
    shortest paths. The closing ``tf -> ti`` hop is dropped.

    Raises:
        NotStronglyConnected: If some vertex cannot reach or be reached from ``ti``
    """
    tg = augment(tg)
    if not is_strongly_connected(tg):
        raise NotStronglyConnected(disconnected_vertices(tg))

    graph = to_networkx(tg)
    dist = {source: dict(lengths) for source, lengths in nx.all_pairs_shortest_path_length(graph)}
    order = list(tg.vertices)
    exact = len(order) <= exact_limit
    tour = _held_karp(order, dist) if exact else _nearest_neighbour_two_opt(order, dist)

    walk = [ENTRY]
    for source, target in zip(tour, tour[1:] + tour[:1]):
        walk.extend(nx.shortest_path(graph, source, target)[1:])
    walk.pop()

    logger.debug("Solved covering walk", k=tg.k, vertices=len(order), cost=len(walk) - 1, exact=exact)
    return CoveringWalk(vertices=tuple(walk), exact=exact)


def split_walk(tg: TransitionGraph, walk: CoveringWalk) -> List[Tuple[str, ...]]:
    """Cut a covering walk at every ``tf -> ti`` hop into complete transition sequences."""
    sequences: List[Tuple[str, ...]] = []
    current: List[str] = []
    for vertex in walk.vertices:
        if vertex == ENTRY:
            current = []
        elif vertex == EXIT:
            if current:
                payloads = [tg.payload[v] for v in current]
                sequence = list(payloads[0]) + [p[-1] for p in payloads[1:]]
                sequences.append(tuple(sequence))
        else:
            current.append(vertex)
    return sequences


def generate_ktc_suite(
    sc: Statechart, k: int, exact_limit: int = DEFAULT_EXACT_LIMIT, cap: int = DEFAULT_SUITE_CAP
) -> TestSuite:
    """Complete test cases covering every legal sequence of length ``k``.

    Complete sequences shorter than ``k`` that cannot be extended are
    collected level by level; the level-``k`` graph is covered by one
    covering walk whose segments become test cases.

    Raises:
        InvalidParameter: If ``k < 1``
        EmptyGraph: If the chart has no complete sequence at all
        NotStronglyConnected: If the level-``k`` graph cannot be covered
        SuiteTooLarge: If a sequence graph or the suite would exceed ``cap``
    """
    if k < 1:
        raise InvalidParameter("k", k, "an integer >= 1")
    flat = flatten(sc)
    base = build_transition_graph(flat)

    sequences: List[Tuple[str, ...]] = []
    for level in range(1, k):
        try:
            graph = base if level == 1 else k_fold_transform(base, level, cap=cap)
        except EmptyGraph:
            break
        sequences.extend(unexpandable_short_sequences(graph))

    try:
        top: Optional[TransitionGraph] = base if k == 1 else k_fold_transform(base, k, cap=cap)
    except EmptyGraph:
        top = None
    if top is not None and top.sequence_vertices:
        augmented = augment(top)
        sequences.extend(split_walk(augmented, solve_gtsp(augmented, exact_limit)))
    elif not sequences:
        raise EmptyGraph(k)

    unique = sorted(set(sequences), key=lambda s: sequence_key(list(s)))
    if len(unique) > cap:
        raise SuiteTooLarge(cap, "k-transition coverage suite")
    transitions = flat.transition_map()
    initial = flat.initial_state().id
    cases = _numbered([(initial, [transitions[t] for t in seq]) for seq in unique], flat)
    logger.info("Generated k-transition coverage suite", model=sc.name, k=k, cases=len(cases))
    return TestSuite(cases=tuple(cases), provenance=SuiteProvenance.KTC)


# -- Sneak paths --------------------------------------------------------------


def derive_faulty_pairs(sc: Statechart) -> Tuple[FaultyPair, ...]:
    """(state, event) pairs no legal transition of the state reacts to, guards ignored."""
    flat = flatten(sc)
    handled = {(t.source, t.event) for t in flat.transitions}
    return tuple(
        FaultyPair(state=state.id, event=event)
        for state in flat.simple_states
        for event in flat.events
        if (state.id, event) not in handled
    )


def derive_false_transition_pairs(sc: Statechart) -> Tuple[FalseTransitionPair, ...]:
    """Every legal transition into a state paired with each faulty event there."""
    flat = flatten(sc)
    return tuple(
        FalseTransitionPair(incoming=t.id, faulty=pair)
        for pair in derive_faulty_pairs(flat)
        for t in in_set(flat, pair.state)
    )


def start_sequence(sc: Statechart, state_id: str) -> Tuple[Transition, ...]:
    """Shortest legal sequence from the initial state to ``state_id``.

    Breadth-first search expanding transitions in id order, so ties go to
    the lexicographically smallest sequence.

    Raises:
        UnreachableState: If no legal sequence reaches the state
    """
    sc.state(state_id)
    initial = sc.initial_state().id
    arrived_by: Dict[str, Optional[Transition]] = {initial: None}
    queue = deque([initial])
    while queue and state_id not in arrived_by:
        current = queue.popleft()
        for transition in sc.transitions:
            if transition.source == current and transition.target not in arrived_by:
                arrived_by[transition.target] = transition
                queue.append(transition.target)

    if state_id not in arrived_by:
        raise UnreachableState(state_id)
    path: List[Transition] = []
    current = state_id
    while arrived_by[current] is not None:
        transition = arrived_by[current]
        path.append(transition)
        current = transition.source
    return tuple(reversed(path))


def executable_inputs(sc: Statechart, case: TestCase) -> Tuple[InputEvent, ...]:
    """Inputs that run a case from the initial state: a start prefix then its own inputs."""
    flat = flatten(sc)
    return enabling_inputs(flat, start_sequence(flat, case.initial_state)) + case.inputs


def generate_guard_probes(sc: Statechart, first_id: int = 1) -> Tuple[TestCase, ...]:
    """One case per guarded transition, reaching its source and firing its event with the guard false."""
    flat = flatten(sc)
    initial = flat.initial_state().id
    probes = []
    number = first_id
    for transition in flat.transitions:
        if transition.guard is None:
            continue
        prefix = start_sequence(flat, transition.source)
        probe = InputEvent(event=transition.event, bindings=choose_bindings(flat, transition, wanted=False))
        probes.append(_case(flat, f"tc{number}", initial, prefix, extra=(probe,)))
        number += 1
    return tuple(probes)


def generate_ftc_suite(
    sc: Statechart,
    pair_coverage: bool = False,
    guard_probes: bool = False,
    cap: int = DEFAULT_SUITE_CAP,
) -> TestSuite:
    """One sneak-path case per faulty pair.

    Each case walks the start sequence to the faulty state and then sends
    the unhandled event, which the model must reject. With
    ``pair_coverage`` there is one case per legal incoming transition of
    the faulty state instead, plus the plain case when the faulty state is
    the initial state. ``guard_probes`` appends guard-false probes.

    Raises:
        UnreachableState: If a faulty state cannot be reached
        SuiteTooLarge: If the suite would exceed ``cap`` cases
    """
    flat = flatten(sc)
    initial = flat.initial_state().id
    planned: List[Tuple[Tuple[Transition, ...], FaultyPair]] = []
    for pair in derive_faulty_pairs(flat):
        if not pair_coverage:
            planned.append((start_sequence(flat, pair.state), pair))
            continue
        if pair.state == initial:
            planned.append(((), pair))
        for incoming in in_set(flat, pair.state):
            planned.append((start_sequence(flat, incoming.source) + (incoming,), pair))
        if len(planned) > cap:
            raise SuiteTooLarge(cap, "Faulty transition suite")
    if len(planned) > cap:
        raise SuiteTooLarge(cap, "Faulty transition suite")

    cases = [
        _case(flat, f"tc{n}", initial, prefix, extra=(InputEvent(event=pair.event),), expect_rejection=True)
        for n, (prefix, pair) in enumerate(planned, start=1)
    ]
    if guard_probes:
        cases.extend(generate_guard_probes(flat, first_id=len(cases) + 1))
        if len(cases) > cap:
            raise SuiteTooLarge(cap, "Faulty transition suite")

    logger.info(
        "Generated faulty transition suite",
        model=sc.name,
        pair_coverage=pair_coverage,
        guard_probes=guard_probes,
        cases=len(cases),
    )
    return TestSuite(cases=tuple(cases), provenance=SuiteProvenance.FTC)
