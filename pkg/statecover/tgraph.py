"""Transition graphs, k-fold sequence graphs and connectivity checks."""

from collections import defaultdict
from typing import Dict, List, Optional, Set, Tuple

import networkx as nx
import structlog

from .exceptions import EmptyGraph, InvalidParameter, SuiteTooLarge
from .machine import flatten
from .models import ENTRY, EXIT, Statechart, TransitionGraph

logger = structlog.get_logger(__name__)

Sequence = Tuple[str, ...]


def build_transition_graph(sc: Statechart) -> TransitionGraph:
    """Build the level-1 transition graph of a chart.

    One vertex per legal transition plus the sentinels. ``(t, t')`` is an
    edge when ``t`` ends where ``t'`` starts, ``(ti, t)`` when ``t`` leaves
    the initial state and ``(t, tf)`` when ``t`` enters a final state.
    Hierarchical charts are flattened first.
    """
    flat = flatten(sc)
    initial = {s.id for s in flat.initial_states}
    finals = {s.id for s in flat.final_states}

    outgoing: Dict[str, List[str]] = defaultdict(list)
    for transition in flat.transitions:
        outgoing[transition.source].append(transition.id)

    edges: Set[Tuple[str, str]] = set()
    for transition in flat.transitions:
        if transition.source in initial:
            edges.add((ENTRY, transition.id))
        if transition.target in finals:
            edges.add((transition.id, EXIT))
        for follower in outgoing[transition.target]:
            edges.add((transition.id, follower))

    graph = TransitionGraph(
        k=1,
        vertices=(ENTRY, EXIT, *(t.id for t in flat.transitions)),
        edges=tuple(edges),
        payload={t.id: (t.id,) for t in flat.transitions},
    )
    logger.debug("Built transition graph", model=sc.name, vertices=len(graph.vertices), edges=len(graph.edges))
    return graph


def augment(tg: TransitionGraph) -> TransitionGraph:
    """Add the return edge ``tf -> ti``; a no-op on an augmented graph."""
    if tg.augmented:
        return tg
    return tg.model_copy(update={"edges": tg.edges + ((EXIT, ENTRY),), "augmented": True})


def _base_edges(tg: TransitionGraph) -> List[Tuple[str, str]]:
    return [e for e in tg.edges if e != (EXIT, ENTRY)]


def k_fold_transform(tg: TransitionGraph, k: int, cap: Optional[int] = None) -> TransitionGraph:
    """Turn a level-1 graph into the graph of legal sequences of length ``k``.

    Vertices are walks of ``k`` transitions (repeats allowed). ``v -> v'``
    when the last ``k - 1`` transitions of ``v`` are the first ``k - 1`` of
    ``v'``. A return edge on the input is ignored and not carried over.

    Raises:
        InvalidParameter: If ``k < 2`` or the graph is not a level-1 graph
        EmptyGraph: If no walk of ``k`` transitions exists
        SuiteTooLarge: If more than ``cap`` walks of ``k`` transitions exist
    """
    if k < 2:
        raise InvalidParameter("k", k, "an integer >= 2")
    if tg.k != 1:
        raise InvalidParameter("graph level", tg.k, "a level-1 transition graph")

    successors: Dict[str, List[str]] = defaultdict(list)
    entry: Set[str] = set()
    exits: Set[str] = set()
    for source, target in _base_edges(tg):
        if source == ENTRY:
            entry.add(target)
        elif target == EXIT:
            exits.add(source)
        else:
            successors[source].append(target)

    walks: List[Sequence] = [(v,) for v in tg.sequence_vertices]
    for _ in range(k - 1):
        walks = [walk + (nxt,) for walk in walks for nxt in successors[walk[-1]]]
        if cap is not None and len(walks) > cap:
            raise SuiteTooLarge(cap, f"Level-{k} transition graph")
    if not walks:
        raise EmptyGraph(k)

    by_prefix: Dict[Sequence, List[Sequence]] = defaultdict(list)
    for walk in walks:
        by_prefix[walk[:-1]].append(walk)

    edges: Set[Tuple[str, str]] = set()
    for walk in walks:
        name = ",".join(walk)
        if walk[0] in entry:
            edges.add((ENTRY, name))
        if walk[-1] in exits:
            edges.add((name, EXIT))
        for follower in by_prefix[walk[1:]]:
            edges.add((name, ",".join(follower)))

    graph = TransitionGraph(
        k=k,
        vertices=(ENTRY, EXIT, *(",".join(w) for w in walks)),
        edges=tuple(edges),
        payload={",".join(w): w for w in walks},
    )
    logger.debug("Transformed transition graph", k=k, vertices=len(graph.vertices), edges=len(graph.edges))
    return graph


def unexpandable_short_sequences(tg: TransitionGraph) -> Tuple[Sequence, ...]:
    """Sequences that only connect to the sentinels.

    Such a vertex is entered from ``ti``, leaves to ``tf`` and has no other
    neighbour, so it is a complete sequence that cannot grow to a longer
    level. The return edge is not counted.
    """
    indegree: Dict[str, int] = defaultdict(int)
    outdegree: Dict[str, int] = defaultdict(int)
    edges = set(_base_edges(tg))
    for source, target in edges:
        outdegree[source] += 1
        indegree[target] += 1

    found = [
        tg.payload[v]
        for v in tg.sequence_vertices
        if (ENTRY, v) in edges and (v, EXIT) in edges and indegree[v] == 1 and outdegree[v] == 1
    ]
    return tuple(found)


def to_networkx(tg: TransitionGraph) -> nx.DiGraph:
    """Directed networkx view of a transition graph, nodes and edges in sorted order."""
    graph = nx.DiGraph()
    graph.add_nodes_from(tg.vertices)
    graph.add_edges_from(tg.edges)
    return graph


def is_strongly_connected(tg: TransitionGraph) -> bool:
    if not tg.vertices:
        return False
    return nx.is_strongly_connected(to_networkx(tg))


def disconnected_vertices(tg: TransitionGraph) -> List[str]:
    """Vertices that cannot be reached from ``ti`` or cannot reach it, in vertex order."""
    graph = to_networkx(tg)
    if ENTRY not in graph:
        return list(tg.vertices)
    linked = (nx.descendants(graph, ENTRY) & nx.ancestors(graph, ENTRY)) | {ENTRY}
    return [v for v in tg.vertices if v not in linked]
