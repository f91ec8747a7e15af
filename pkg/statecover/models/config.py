"""Per-invocation configuration models for statecover commands."""

from enum import Enum
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator


class SubsumptionRelation(str, Enum):
    """Element relation used to decide whether one test case covers another."""
    NODE = "node-subset"
    TRANSITION = "transition-subset"
    ELEMENT = "element-subset"


class Grouping(str, Enum):
    """Which test cases may cover each other."""
    GLOBAL = "global"
    BY_INITIAL_STATE = "by-initial-state"


class SubsumptionStrategy(BaseModel):
    """Model for a coverage subsumption strategy.

    element-subset means states, transitions, inputs and outputs are all
    subset-contained.
    """

    model_config = ConfigDict(frozen=True)

    relation: SubsumptionRelation = Field(default=SubsumptionRelation.ELEMENT)
    grouping: Grouping = Field(default=Grouping.GLOBAL)

    def __str__(self) -> str:
        return f"{self.relation.value}/{self.grouping.value}"


class GenerationMode(str, Enum):
    """Suite generation modes."""
    ENUMERATE = "enumerate"
    KTC = "ktc"
    FTC = "ftc"


class OutputFormat(str, Enum):
    """Artifact output formats."""
    JSON = "json"
    TEXT = "text"
    DOT = "dot"


class RunConfig(BaseModel):
    """Model for a single command invocation."""

    command: str = Field(..., description="Sub-command name")
    input_path: Path = Field(..., description="Primary input file (model or suite)")
    model_path: Optional[Path] = Field(None, description="Model file when input is a suite")
    mode: GenerationMode = Field(default=GenerationMode.KTC)
    k: int = Field(default=1, description="Transition sequence length for k-TC")
    max_len: int = Field(default=7, description="Longest enumerated sequence")
    pair_coverage: bool = Field(default=False, description="FTC over false transition pairs")
    guard_probes: bool = Field(default=False, description="Add guard-false probe cases")
    strategy: SubsumptionStrategy = Field(default_factory=SubsumptionStrategy)
    path_bound: Optional[int] = Field(None, description="Longest complete path counted by path coverage")
    output_format: OutputFormat = Field(default=OutputFormat.JSON)
    output_path: Optional[Path] = Field(None, description="Write artifact here instead of stdout")
    suite_cap: int = Field(default=100000, description="Maximum generated test cases")

    @field_validator("k", "max_len")
    @classmethod
    def validate_positive(cls, v: int) -> int:
        """Validate sequence lengths."""
        if v < 1:
            raise ValueError("Must be at least 1")
        return v

    @field_validator("suite_cap")
    @classmethod
    def validate_suite_cap(cls, v: int) -> int:
        """Validate suite cap."""
        if v < 1:
            raise ValueError("Suite cap must be at least 1")
        return v

    @field_validator("path_bound")
    @classmethod
    def validate_path_bound(cls, v: Optional[int]) -> Optional[int]:
        """Validate path bound."""
        if v is not None and v < 1:
            raise ValueError("Path bound must be at least 1")
        return v
