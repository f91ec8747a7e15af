"""Test suite, execution and generation result models."""

import re
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .statechart import Transition

NO_ENABLED_TRANSITION = "no_enabled_transition"
_VERDICT = re.compile(r"^rejected_at\((\d+), ([a-z_]+)\)$")


class SuiteProvenance(str, Enum):
    """How a suite was produced."""
    ENUMERATED = "enumerated"
    KTC = "ktc"
    FTC = "ftc"
    MINIMIZED = "minimized"


class InputEvent(BaseModel):
    """One input of a test case: an event plus optional integer bindings."""

    model_config = ConfigDict(frozen=True)

    event: str = Field(..., description="Event name")
    bindings: Dict[str, int] = Field(default_factory=dict, description="Variable bindings for guards")

    @field_validator("bindings")
    @classmethod
    def sort_bindings(cls, v: Dict[str, int]) -> Dict[str, int]:
        return {name: v[name] for name in sorted(v)}

    def __str__(self) -> str:
        if not self.bindings:
            return self.event
        args = ", ".join(f"{k}={v}" for k, v in self.bindings.items())
        return f"{self.event}({args})"


class Verdict(BaseModel):
    """Outcome of an execution: accepted, or rejected at a 1-based step."""

    model_config = ConfigDict(frozen=True)

    accepted: bool = Field(default=True)
    step: Optional[int] = Field(None, ge=1, description="1-based input index of the rejection")
    reason: Optional[str] = Field(None, description="Rejection reason")

    @classmethod
    def rejected_at(cls, step: int, reason: str = NO_ENABLED_TRANSITION) -> "Verdict":
        return cls(accepted=False, step=step, reason=reason)

    @classmethod
    def parse(cls, text: str) -> "Verdict":
        if text == "accepted":
            return cls()
        match = _VERDICT.match(text)
        if not match:
            raise ValueError(f"Invalid verdict '{text}'")
        return cls.rejected_at(int(match.group(1)), match.group(2))

    def __str__(self) -> str:
        if self.accepted:
            return "accepted"
        return f"rejected_at({self.step}, {self.reason})"


class ExecTrace(BaseModel):
    """Result of running inputs on a statechart."""

    model_config = ConfigDict(frozen=True)

    states: Tuple[str, ...] = Field(..., description="Visited states, start included")
    transitions: Tuple[str, ...] = Field(default_factory=tuple, description="Fired transition ids")
    outputs: Tuple[str, ...] = Field(default_factory=tuple, description="Emitted outputs in order")
    verdict: Verdict = Field(default_factory=Verdict)
    guard_outcomes: Tuple[Tuple[str, bool], ...] = Field(
        default_factory=tuple, description="(transition id, guard value) per evaluated guard"
    )


class StepResult(BaseModel):
    """Outcome of a single step; ``fired`` is None when no transition was enabled."""

    model_config = ConfigDict(frozen=True)

    fired: Optional[Transition] = None
    next_state: str
    guard_outcomes: Tuple[Tuple[str, bool], ...] = Field(default_factory=tuple)

    @property
    def enabled(self) -> bool:
        return self.fired is not None


class TestCase(BaseModel):
    """Model for a test case, the triplet [I, S, O] plus its traces."""

    __test__ = False  # not a pytest class

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    id: str = Field(..., description="Test case identifier")
    initial_state: str = Field(..., alias="I", description="State the inputs are applied in")
    inputs: Tuple[InputEvent, ...] = Field(default_factory=tuple, description="Input events (ID)")
    expected_outputs: Tuple[str, ...] = Field(default_factory=tuple, description="Expected outputs (OD)")
    states: Tuple[str, ...] = Field(..., description="Visited states (ST)")
    transitions: Tuple[str, ...] = Field(default_factory=tuple, description="Exercised transitions (TR)")
    complete: bool = Field(default=False, description="Starts initial, ends final")
    expected_verdict: str = Field(default="accepted", description="accepted or rejected_at(step, reason)")

    @field_validator("expected_verdict")
    @classmethod
    def validate_verdict(cls, v: str) -> str:
        return str(Verdict.parse(v))

    @model_validator(mode="after")
    def check_trace_shape(self) -> "TestCase":
        if not self.states:
            raise ValueError(f"Test case {self.id}: empty state trace")
        if len(self.transitions) != len(self.states) - 1:
            raise ValueError(
                f"Test case {self.id}: {len(self.transitions)} transitions for {len(self.states)} states"
            )
        if self.states[0] != self.initial_state:
            raise ValueError(f"Test case {self.id}: state trace does not start at I={self.initial_state}")
        return self

    @property
    def verdict(self) -> Verdict:
        return Verdict.parse(self.expected_verdict)


class TestSuite(BaseModel):
    """Model for an ordered test suite with unique case ids."""

    __test__ = False

    model_config = ConfigDict(frozen=True)

    cases: Tuple[TestCase, ...] = Field(default_factory=tuple, description="Ordered test cases")
    provenance: SuiteProvenance = Field(default=SuiteProvenance.ENUMERATED)

    @field_validator("cases")
    @classmethod
    def validate_unique_ids(cls, v: Tuple[TestCase, ...]) -> Tuple[TestCase, ...]:
        seen = set()
        for case in v:
            if case.id in seen:
                raise ValueError(f"Duplicate test case id '{case.id}'")
            seen.add(case.id)
        return v

    def __len__(self) -> int:
        return len(self.cases)

    def ids(self) -> List[str]:
        return [case.id for case in self.cases]

    def get(self, case_id: str) -> Optional[TestCase]:
        for case in self.cases:
            if case.id == case_id:
                return case
        return None


class FaultyPair(BaseModel):
    """A sneak path: an event no transition of ``state`` reacts to."""

    model_config = ConfigDict(frozen=True)

    state: str
    event: str

    def __str__(self) -> str:
        return f"({self.state}, {self.event})"


class FalseTransitionPair(BaseModel):
    """A legal transition into a state followed by a faulty event there."""

    model_config = ConfigDict(frozen=True)

    incoming: str = Field(..., description="Legal transition id entering the faulty state")
    faulty: FaultyPair

    def __str__(self) -> str:
        return f"({self.incoming}, {self.faulty})"


class CoveringWalk(BaseModel):
    """A walk from ti to tf through an augmented transition graph."""

    model_config = ConfigDict(frozen=True)

    vertices: Tuple[str, ...] = Field(..., description="Visited vertex names in order")
    exact: bool = Field(default=True, description="Optimal (exact solver) or heuristic")

    @property
    def cost(self) -> int:
        return max(0, len(self.vertices) - 1)
