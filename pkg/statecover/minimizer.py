"""Coverage subsumption between test cases and suite reduction."""

from typing import Dict, FrozenSet, List, Optional, Tuple, Union

import structlog

from .exceptions import EmptySuite, InvalidParameter, UnknownTestCase
from .models import (
    CoverageDimension,
    Grouping,
    SubsumptionRelation,
    SubsumptionStrategy,
    SuiteProvenance,
    TestCase,
    TestSuite,
    natural_key,
)

logger = structlog.get_logger(__name__)


def element_set(case: TestCase, relation: SubsumptionRelation) -> FrozenSet[str]:
    """Elements a case exercises under a relation.

    element-subset tags each element with its kind (``state:``,
    ``transition:``, ``input:``, ``output:``) so ids cannot collide.
    """
    if relation is SubsumptionRelation.NODE:
        return frozenset(case.states)
    if relation is SubsumptionRelation.TRANSITION:
        return frozenset(case.transitions)
    return frozenset(
        [f"state:{s}" for s in case.states]
        + [f"transition:{t}" for t in case.transitions]
        + [f"input:{i.event}" for i in case.inputs]
        + [f"output:{o}" for o in case.expected_outputs]
    )


def _covers(
    other: TestCase,
    case: TestCase,
    elements: Dict[str, FrozenSet[str]],
    grouping: Grouping,
) -> bool:
    if other.id == case.id:
        return False
    if grouping is Grouping.BY_INITIAL_STATE and other.initial_state != case.initial_state:
        return False
    mine, theirs = elements[case.id], elements[other.id]
    if not mine <= theirs:
        return False
    # equal sets: only the smaller id covers
    return mine != theirs or natural_key(other.id) < natural_key(case.id)


def subsumption_table(suite: TestSuite, strategy: Optional[SubsumptionStrategy] = None) -> Dict[str, Tuple[str, ...]]:
    """Covering set of every case, keyed by case id in suite order."""
    strategy = strategy or SubsumptionStrategy()
    elements = {case.id: element_set(case, strategy.relation) for case in suite.cases}
    return {
        case.id: tuple(
            sorted(
                (other.id for other in suite.cases if _covers(other, case, elements, strategy.grouping)),
                key=natural_key,
            )
        )
        for case in suite.cases
    }


def covering_set(
    case: Union[str, TestCase],
    suite: TestSuite,
    strategy: Optional[SubsumptionStrategy] = None,
) -> Tuple[str, ...]:
    """Ids of the other cases whose elements contain those of ``case``.

    Raises:
        UnknownTestCase: If the case is not part of the suite
    """
    strategy = strategy or SubsumptionStrategy()
    case_id = case if isinstance(case, str) else case.id
    target = suite.get(case_id)
    if target is None:
        raise UnknownTestCase(case_id)
    elements = {c.id: element_set(c, strategy.relation) for c in suite.cases}
    covering = (other.id for other in suite.cases if _covers(other, target, elements, strategy.grouping))
    return tuple(sorted(covering, key=natural_key))


def minimize_suite(suite: TestSuite, strategy: Optional[SubsumptionStrategy] = None) -> TestSuite:
    """Keep exactly the cases no other case covers, in suite order.

    Raises:
        EmptySuite: If the suite has no cases
    """
    if not suite.cases:
        raise EmptySuite("Minimization")
    strategy = strategy or SubsumptionStrategy()
    table = subsumption_table(suite, strategy)
    kept = tuple(case for case in suite.cases if not table[case.id])
    logger.info("Minimized suite", strategy=str(strategy), before=len(suite), after=len(kept))
    return TestSuite(cases=kept, provenance=SuiteProvenance.MINIMIZED)


def _dimension(case: TestCase, target: CoverageDimension) -> FrozenSet[str]:
    if target is CoverageDimension.STATES:
        return frozenset(case.states)
    if target is CoverageDimension.TRANSITIONS:
        return frozenset(case.transitions)
    if target is CoverageDimension.ACTIONS:
        return frozenset(case.expected_outputs)
    raise InvalidParameter("target", target.value, "states, transitions or actions")


def greedy_reduce(suite: TestSuite, target: CoverageDimension = CoverageDimension.TRANSITIONS) -> TestSuite:
    """Greedy set cover over one dimension.

    Repeatedly picks the case adding the most uncovered elements, ties
    going to the smaller id, until the union of the full suite is reached.
    The chosen cases keep their suite order.

    Raises:
        EmptySuite: If the suite has no cases
        InvalidParameter: If the dimension has no per-case element set
    """
    if not suite.cases:
        raise EmptySuite("Greedy reduction")
    covers = {case.id: _dimension(case, target) for case in suite.cases}
    remaining = frozenset().union(*covers.values())
    chosen: List[str] = []
    while remaining:
        best = min(
            (cid for cid in covers if cid not in chosen),
            key=lambda cid: (-len(covers[cid] & remaining), natural_key(cid)),
        )
        chosen.append(best)
        remaining = remaining - covers[best]

    kept = tuple(case for case in suite.cases if case.id in chosen)
    logger.info("Reduced suite", target=target.value, before=len(suite), after=len(kept))
    return TestSuite(cases=kept, provenance=SuiteProvenance.MINIMIZED)
