"""Coverage report models."""

from enum import Enum
from typing import Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, computed_field


class CoverageDimension(str, Enum):
    """Element dimensions a suite can cover."""
    STATES = "states"
    TRANSITIONS = "transitions"
    PATHS = "paths"
    ACTIONS = "actions"
    CONDITIONS = "conditions"


class DimensionCoverage(BaseModel):
    """Covered and uncovered elements of one dimension."""

    model_config = ConfigDict(frozen=True)

    covered: Tuple[str, ...] = Field(default_factory=tuple)
    uncovered: Tuple[str, ...] = Field(default_factory=tuple)

    @computed_field  # type: ignore[misc]
    @property
    def total(self) -> int:
        return len(self.covered) + len(self.uncovered)

    @computed_field  # type: ignore[misc]
    @property
    def ratio(self) -> Optional[float]:
        """|covered| / |total|, or None (not applicable) when nothing can be covered."""
        if self.total == 0:
            return None
        return len(self.covered) / self.total


class CoverageReport(BaseModel):
    """Coverage ratios of a suite against a model."""

    model_config = ConfigDict(frozen=True)

    model_name: str = Field(..., description="Statechart name")
    suite_size: int = Field(..., ge=0)
    path_bound: int = Field(..., ge=1, description="Longest complete path counted")
    states: DimensionCoverage
    transitions: DimensionCoverage
    paths: DimensionCoverage
    actions: DimensionCoverage
    conditions: DimensionCoverage

    @property
    def state_cov(self) -> Optional[float]:
        return self.states.ratio

    @property
    def transition_cov(self) -> Optional[float]:
        return self.transitions.ratio

    @property
    def path_cov(self) -> Optional[float]:
        return self.paths.ratio

    @property
    def action_cov(self) -> Optional[float]:
        return self.actions.ratio

    @property
    def condition_cov(self) -> Optional[float]:
        return self.conditions.ratio

    def dimensions(self) -> Dict[CoverageDimension, DimensionCoverage]:
        return {
            CoverageDimension.STATES: self.states,
            CoverageDimension.TRANSITIONS: self.transitions,
            CoverageDimension.PATHS: self.paths,
            CoverageDimension.ACTIONS: self.actions,
            CoverageDimension.CONDITIONS: self.conditions,
        }
