"""Execute input events on a flat statechart."""

from typing import List, Mapping, Sequence, Tuple, Union

import structlog

from .exceptions import NondeterministicModel, UnboundVariable, UnknownState
from .guards import GuardExpr, Value, parse_guard
from .models import ExecTrace, InputEvent, Statechart, StateKind, StepResult, Transition, Verdict

logger = structlog.get_logger(__name__)

Input = Union[str, InputEvent]


def eval_guard(guard: Union[str, GuardExpr], env: Mapping[str, Value]) -> bool:
    """Evaluate a guard under variable bindings.

    Raises:
        UnboundVariable: If a variable of the guard has no binding
    """
    expr = parse_guard(guard) if isinstance(guard, str) else guard
    missing = sorted(expr.variables() - set(env))
    if missing:
        raise UnboundVariable(missing[0], str(expr))
    return bool(expr.evaluate(env))


def _as_input(item: Input) -> InputEvent:
    return item if isinstance(item, InputEvent) else InputEvent(event=item)


def step(sc: Statechart, current: str, item: Input) -> StepResult:
    """Fire the unique transition enabled by one input.

    An input no transition reacts to leaves the machine where it is and
    fires nothing (``result.fired is None``).

    Raises:
        UnknownState: If ``current`` is not a simple state of the chart
        NondeterministicModel: If more than one transition is enabled
        UnboundVariable: If an evaluated guard lacks a binding
    """
    state = sc.state(current)
    if state.kind is not StateKind.SIMPLE:
        raise UnknownState(current, context={"reason": "not a simple state"})
    event = _as_input(item)

    enabled: List[Transition] = []
    outcomes: List[Tuple[str, bool]] = []
    for transition in sc.transitions:
        if transition.source != current or transition.event != event.event:
            continue
        guard = transition.guard_expr
        if guard is None:
            enabled.append(transition)
            continue
        value = eval_guard(guard, event.bindings)
        outcomes.append((transition.id, value))
        if value:
            enabled.append(transition)

    if len(enabled) > 1:
        raise NondeterministicModel(current, event.event, [t.id for t in enabled])
    if not enabled:
        return StepResult(fired=None, next_state=current, guard_outcomes=tuple(outcomes))
    return StepResult(fired=enabled[0], next_state=enabled[0].target, guard_outcomes=tuple(outcomes))


def run(sc: Statechart, start: str, inputs: Sequence[Input]) -> ExecTrace:
    """Apply inputs from ``start`` until they are used up or one is rejected."""
    states = [start]
    transitions: List[str] = []
    outputs: List[str] = []
    outcomes: List[Tuple[str, bool]] = []
    verdict = Verdict()
    sc.state(start)

    current = start
    for index, item in enumerate(inputs, start=1):
        result = step(sc, current, item)
        outcomes.extend(result.guard_outcomes)
        if result.fired is None:
            verdict = Verdict.rejected_at(index)
            break
        transitions.append(result.fired.id)
        outputs.append(result.fired.output)
        current = result.next_state
        states.append(current)

    trace = ExecTrace(
        states=tuple(states),
        transitions=tuple(transitions),
        outputs=tuple(outputs),
        verdict=verdict,
        guard_outcomes=tuple(outcomes),
    )
    logger.debug("Executed inputs", model=sc.name, start=start, inputs=len(inputs), verdict=str(verdict))
    return trace
