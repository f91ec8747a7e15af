"""Statechart domain models."""

import re
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..exceptions import UnknownState
from ..guards import GuardExpr, canonical_guard, parse_guard

IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z0-9_.]*$")
SENTINELS = frozenset({"ti", "tf"})
_DIGITS = re.compile(r"(\d+)")


def natural_key(identifier: str) -> Tuple[object, ...]:
    """Sort key ordering ``TR2`` before ``TR10``."""
    return tuple(int(part) if part.isdigit() else part for part in _DIGITS.split(identifier))


def sequence_key(identifiers: List[str]) -> Tuple[Tuple[object, ...], ...]:
    """Lexicographic sort key over a list of identifiers."""
    return tuple(natural_key(i) for i in identifiers)


class StateKind(str, Enum):
    """Enumeration of state kinds."""
    SIMPLE = "simple"
    COMPOSITE = "composite"


class TransitionKind(str, Enum):
    """Enumeration of transition kinds."""
    LEGAL = "legal"
    FAULTY = "faulty"


class State(BaseModel):
    """Model for a statechart state."""

    model_config = ConfigDict(frozen=True)

    id: str = Field(..., description="State identifier")
    kind: StateKind = Field(default=StateKind.SIMPLE, description="Simple or composite")
    is_initial: bool = Field(default=False, description="Top-level initial state")
    is_final: bool = Field(default=False, description="Final state")
    parent: Optional[str] = Field(None, description="Enclosing composite state")
    is_entry: bool = Field(default=False, description="Default entry child of its parent")

    @field_validator("id", "parent")
    @classmethod
    def validate_identifier(cls, v: Optional[str]) -> Optional[str]:
        """Validate state identifiers."""
        if v is not None and not IDENTIFIER.match(v):
            raise ValueError(f"Invalid identifier '{v}'")
        return v


class Transition(BaseModel):
    """Model for a labelled transition ``event [guard] / action``."""

    model_config = ConfigDict(frozen=True)

    id: str = Field(..., description="Transition identifier, e.g. TR1")
    source: str = Field(..., description="Source state id")
    target: str = Field(..., description="Target state id")
    event: str = Field(..., description="Trigger event name")
    guard: Optional[str] = Field(None, description="Guard expression in canonical form")
    action: Optional[str] = Field(None, description="Output / action label")
    kind: TransitionKind = Field(default=TransitionKind.LEGAL, description="Legal or faulty")

    @field_validator("id", "source", "target", "event")
    @classmethod
    def validate_identifier(cls, v: str) -> str:
        """Validate identifiers."""
        if not IDENTIFIER.match(v):
            raise ValueError(f"Invalid identifier '{v}'")
        return v

    @field_validator("guard")
    @classmethod
    def validate_guard(cls, v: Optional[str]) -> Optional[str]:
        """Store guards canonically so equal guards compare equal."""
        if v is None:
            return None
        return canonical_guard(v)

    @field_validator("action")
    @classmethod
    def validate_action(cls, v: Optional[str]) -> Optional[str]:
        """Validate action label."""
        if v is None:
            return None
        v = v.strip()
        if not v or "\n" in v or "#" in v:
            raise ValueError("Action label must be a non-empty single line without '#'")
        return v

    @property
    def guard_expr(self) -> Optional[GuardExpr]:
        return parse_guard(self.guard) if self.guard is not None else None

    @property
    def output(self) -> str:
        """Expected output token of firing this transition."""
        return self.action if self.action is not None else f"out({self.id})"

    @property
    def label(self) -> str:
        text = self.event
        if self.guard is not None:
            text += f" [{self.guard}]"
        if self.action is not None:
            text += f" / {self.action}"
        return text


class Violation(BaseModel):
    """A broken well-formedness rule."""

    model_config = ConfigDict(frozen=True)

    code: str = Field(..., description="Violation code, e.g. unreachable")
    subject: Optional[str] = Field(None, description="Offending element id")
    message: str = Field(default="", description="Human-readable explanation")

    def __str__(self) -> str:
        return f"{self.code}({self.subject})" if self.subject else self.code


class Statechart(BaseModel):
    """Model for a statechart: events, states, hierarchy and transitions.

    Collections are stored sorted by natural id order so two charts with the
    same content compare equal regardless of declaration order.
    """

    model_config = ConfigDict(frozen=True)

    name: str = Field(..., description="Statechart name")
    events: Tuple[str, ...] = Field(default_factory=tuple, description="Event alphabet")
    variables: Tuple[str, ...] = Field(default_factory=tuple, description="Integer guard variables")
    states: Tuple[State, ...] = Field(default_factory=tuple, description="All states")
    transitions: Tuple[Transition, ...] = Field(default_factory=tuple, description="Legal transitions")

    @field_validator("name")
    @classmethod
    def validate_name(cls, v: str) -> str:
        if not IDENTIFIER.match(v):
            raise ValueError(f"Invalid statechart name '{v}'")
        return v

    @field_validator("events", "variables")
    @classmethod
    def sort_names(cls, v: Tuple[str, ...]) -> Tuple[str, ...]:
        return tuple(sorted(set(v), key=natural_key))

    @field_validator("states")
    @classmethod
    def sort_states(cls, v: Tuple[State, ...]) -> Tuple[State, ...]:
        return tuple(sorted(v, key=lambda s: natural_key(s.id)))

    @field_validator("transitions")
    @classmethod
    def sort_transitions(cls, v: Tuple[Transition, ...]) -> Tuple[Transition, ...]:
        return tuple(sorted(v, key=lambda t: natural_key(t.id)))

    @model_validator(mode="after")
    def check_faulty_not_stored(self) -> "Statechart":
        for transition in self.transitions:
            if transition.kind is TransitionKind.FAULTY:
                raise ValueError(f"Faulty transition '{transition.id}' cannot be part of a statechart")
        return self

    def state_map(self) -> Dict[str, State]:
        return {s.id: s for s in self.states}

    def transition_map(self) -> Dict[str, Transition]:
        return {t.id: t for t in self.transitions}

    def state(self, state_id: str) -> State:
        for state in self.states:
            if state.id == state_id:
                return state
        raise UnknownState(state_id)

    def transition(self, transition_id: str) -> Transition:
        for transition in self.transitions:
            if transition.id == transition_id:
                return transition
        raise KeyError(transition_id)

    @property
    def initial_states(self) -> Tuple[State, ...]:
        return tuple(s for s in self.states if s.is_initial)

    @property
    def final_states(self) -> Tuple[State, ...]:
        return tuple(s for s in self.states if s.is_final)

    @property
    def simple_states(self) -> Tuple[State, ...]:
        return tuple(s for s in self.states if s.kind is StateKind.SIMPLE)

    @property
    def is_flat(self) -> bool:
        return all(s.kind is StateKind.SIMPLE and s.parent is None for s in self.states)

    def children(self, state_id: str) -> Tuple[State, ...]:
        return tuple(s for s in self.states if s.parent == state_id)

    def initial_state(self) -> State:
        """The unique initial state (first in id order if the chart is malformed)."""
        initial = self.initial_states
        if not initial:
            raise UnknownState("<initial>")
        return initial[0]
