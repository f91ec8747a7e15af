"""Statechart DSL: parsing and canonical serialization.

The DSL is line oriented; ``#`` starts a comment::

    statechart <Name>
    events <e1> <e2> ...
    vars <v1> <v2> ...
    state <Id> [initial] [final] [in <ParentId>] [entry]
    transition <Id>: <Src> -> <Dst> on <event> [ [<guard>] ] [ / <action> ]
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple, Union

import pyparsing as pp
import structlog
from pydantic import ValidationError

from .exceptions import SemanticError, StatechartSyntaxError, ValidationFailed
from .guards import parse_guard
from .machine import validate
from .models import State, Statechart, StateKind, Transition

logger = structlog.get_logger(__name__)

_IDENT = pp.Regex(r"[A-Za-z_][A-Za-z0-9_.]*")
_NAME = pp.Regex(r"[A-Za-z_][A-Za-z0-9_]*")

_HEADER = pp.Keyword("statechart") + _IDENT("name")
_EVENTS = pp.Keyword("events") + pp.Group(pp.OneOrMore(_IDENT))("names")
_VARS = pp.Keyword("vars") + pp.Group(pp.OneOrMore(_NAME))("names")
_STATE_FLAG = pp.Keyword("initial") | pp.Keyword("final") | pp.Keyword("entry") | pp.Group(pp.Keyword("in") + _IDENT)
_STATE = pp.Keyword("state") + _IDENT("id") + pp.Group(pp.ZeroOrMore(_STATE_FLAG))("flags")
_TRANSITION = (
    pp.Keyword("transition")
    + _IDENT("id")
    + pp.Suppress(":")
    + _IDENT("source")
    + pp.Suppress("->")
    + _IDENT("target")
    + pp.Keyword("on")
    + _IDENT("event")
    + pp.Optional(pp.Suppress("[") + pp.SkipTo("]")("guard") + pp.Suppress("]"))
    + pp.Optional(pp.Suppress("/") + pp.Regex(r"\S.*")("action"))
)

_GRAMMARS = {
    "statechart": _HEADER,
    "events": _EVENTS,
    "vars": _VARS,
    "state": _STATE,
    "transition": _TRANSITION,
}


@dataclass
class _Draft:
    """Declarations collected while reading, resolved once the file is read."""

    name: Optional[str] = None
    events: List[str] = field(default_factory=list)
    variables: List[str] = field(default_factory=list)
    states: Dict[str, Tuple[int, dict]] = field(default_factory=dict)
    transitions: Dict[str, Tuple[int, dict]] = field(default_factory=dict)
    initial_line: Optional[int] = None


def _parse_line(keyword: str, text: str, line_no: int) -> pp.ParseResults:
    try:
        return _GRAMMARS[keyword].parse_string(text, parse_all=True)
    except pp.ParseBaseException as e:
        raise StatechartSyntaxError(
            f"Malformed '{keyword}' line: {e.msg}",
            line=line_no,
            column=e.loc + 1,
            length=max(1, len(text) - e.loc),
        ) from None


def _read_state(draft: _Draft, result: pp.ParseResults, line_no: int) -> None:
    state_id = result["id"]
    if state_id in draft.states:
        raise SemanticError(f"Duplicate state id '{state_id}'", code="duplicate-id", line=line_no)
    attrs: dict = {"is_initial": False, "is_final": False, "is_entry": False, "parent": None}
    for flag in result["flags"]:
        if isinstance(flag, str):
            key = {"initial": "is_initial", "final": "is_final", "entry": "is_entry"}[flag]
            if attrs[key]:
                raise StatechartSyntaxError(f"Repeated flag '{flag}'", line=line_no)
            attrs[key] = True
        else:
            if attrs["parent"] is not None:
                raise StatechartSyntaxError("Repeated 'in' clause", line=line_no)
            attrs["parent"] = flag[1]
    if attrs["is_initial"]:
        if draft.initial_line is not None:
            raise SemanticError(
                f"State '{state_id}' is declared initial but line {draft.initial_line} already declares one",
                code="duplicate-initial",
                line=line_no,
            )
        draft.initial_line = line_no
    draft.states[state_id] = (line_no, attrs)


def _read_transition(draft: _Draft, result: pp.ParseResults, raw: str, line_no: int, indent: int = 0) -> None:
    transition_id = result["id"]
    if transition_id in draft.transitions:
        raise SemanticError(f"Duplicate transition id '{transition_id}'", code="duplicate-id", line=line_no)
    guard = None
    if "guard" in result:
        column = indent + raw.index("[") + 2
        guard = str(parse_guard(result["guard"], line_no, column))
    draft.transitions[transition_id] = (
        line_no,
        {
            "id": transition_id,
            "source": result["source"],
            "target": result["target"],
            "event": result["event"],
            "guard": guard,
            "action": result["action"].strip() if "action" in result else None,
        },
    )


def _resolve(draft: _Draft) -> Statechart:
    events: Set[str] = set(draft.events)
    variables: Set[str] = set(draft.variables)
    parents = {attrs["parent"] for _, attrs in draft.states.values() if attrs["parent"] is not None}

    states = []
    for state_id, (line_no, attrs) in draft.states.items():
        if attrs["parent"] is not None and attrs["parent"] not in draft.states:
            raise SemanticError(f"Unknown parent state '{attrs['parent']}'", code="unknown-state", line=line_no)
        kind = StateKind.COMPOSITE if state_id in parents else StateKind.SIMPLE
        states.append(State(id=state_id, kind=kind, **attrs))

    transitions = []
    for line_no, attrs in draft.transitions.values():
        for end in ("source", "target"):
            if attrs[end] not in draft.states:
                raise SemanticError(f"Unknown state '{attrs[end]}'", code="unknown-state", line=line_no)
        if attrs["event"] not in events:
            raise SemanticError(f"Unknown event '{attrs['event']}'", code="unknown-event", line=line_no)
        if attrs["guard"] is not None:
            unknown = sorted(parse_guard(attrs["guard"]).variables() - variables)
            if unknown:
                raise SemanticError(
                    f"Guard uses undeclared variable '{unknown[0]}'", code="unknown-variable", line=line_no
                )
        transitions.append(Transition(**attrs))

    return Statechart(
        name=draft.name or "",
        events=tuple(draft.events),
        variables=tuple(draft.variables),
        states=tuple(states),
        transitions=tuple(transitions),
    )


def parse_statechart(text: Union[str, bytes], strict: bool = False) -> Statechart:
    """Parse DSL text into a statechart and run validation on it.

    Violations found by validation are logged; with ``strict`` they raise.

    Raises:
        StatechartSyntaxError: If the text does not follow the grammar
        SemanticError: If ids are unknown or duplicated, or two states are initial
        ValidationFailed: If ``strict`` and the chart breaks a well-formedness rule
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise StatechartSyntaxError(f"Input is not UTF-8: {e.reason}", line=1, column=1) from None

    draft = _Draft()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.lstrip()
        if not stripped:
            continue
        indent = len(line) - len(stripped)
        keyword = stripped.split(None, 1)[0]
        if keyword not in _GRAMMARS:
            raise StatechartSyntaxError(
                f"Unknown statement '{keyword}'", line=line_no, column=indent + 1, length=len(keyword)
            )
        if draft.name is None and keyword != "statechart":
            raise StatechartSyntaxError("Expected 'statechart <Name>' header", line=line_no, column=indent + 1)
        if draft.name is not None and keyword == "statechart":
            raise StatechartSyntaxError("Repeated 'statechart' header", line=line_no, column=indent + 1)

        try:
            result = _parse_line(keyword, stripped, line_no)
        except StatechartSyntaxError as e:
            raise StatechartSyntaxError(
                e.message, line=line_no, column=e.column + indent, length=e.span.length
            ) from None

        if keyword == "statechart":
            draft.name = result["name"]
        elif keyword == "events":
            draft.events.extend(result["names"])
        elif keyword == "vars":
            draft.variables.extend(result["names"])
        elif keyword == "state":
            _read_state(draft, result, line_no)
        else:
            _read_transition(draft, result, stripped, line_no, indent)

    if draft.name is None:
        raise StatechartSyntaxError("Missing 'statechart <Name>' header", line=1, column=1)

    try:
        sc = _resolve(draft)
    except ValidationError as e:
        raise SemanticError(f"Invalid statechart: {e.errors()[0]['msg']}", code="invalid-model") from None

    violations = validate(sc)
    if violations:
        logger.warning("Statechart has violations", model=sc.name, violations=[str(v) for v in violations])
        if strict:
            raise ValidationFailed(violations)
    logger.debug("Parsed statechart", model=sc.name, states=len(sc.states), transitions=len(sc.transitions))
    return sc


def serialize_statechart(sc: Statechart) -> str:
    """Render a statechart as canonical DSL text.

    ``parse_statechart(serialize_statechart(sc)) == sc`` for every valid chart.
    """
    lines = [f"statechart {sc.name}"]
    if sc.events:
        lines.append("events " + " ".join(sc.events))
    if sc.variables:
        lines.append("vars " + " ".join(sc.variables))
    for state in sc.states:
        parts = ["state", state.id]
        if state.is_initial:
            parts.append("initial")
        if state.is_final:
            parts.append("final")
        if state.parent is not None:
            parts.extend(["in", state.parent])
        if state.is_entry:
            parts.append("entry")
        lines.append(" ".join(parts))
    for transition in sc.transitions:
        text = f"transition {transition.id}: {transition.source} -> {transition.target} on {transition.event}"
        if transition.guard is not None:
            text += f" [{transition.guard}]"
        if transition.action is not None:
            text += f" / {transition.action}"
        lines.append(text)
    return "\n".join(lines) + "\n"
