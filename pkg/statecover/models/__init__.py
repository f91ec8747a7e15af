"""Data models for statecover."""

from .config import (
    GenerationMode,
    Grouping,
    OutputFormat,
    RunConfig,
    SubsumptionRelation,
    SubsumptionStrategy,
)

from .graph import (
    ENTRY,
    EXIT,
    TransitionGraph,
    edge_key,
    vertex_key,
)

from .report import (
    CoverageDimension,
    CoverageReport,
    DimensionCoverage,
)

from .statechart import (
    SENTINELS,
    State,
    StateKind,
    Statechart,
    Transition,
    TransitionKind,
    Violation,
    natural_key,
    sequence_key,
)

from .suite import (
    NO_ENABLED_TRANSITION,
    CoveringWalk,
    ExecTrace,
    FalseTransitionPair,
    FaultyPair,
    InputEvent,
    StepResult,
    SuiteProvenance,
    TestCase,
    TestSuite,
    Verdict,
)

__all__ = [
    # Configuration models
    'GenerationMode',
    'Grouping',
    'OutputFormat',
    'RunConfig',
    'SubsumptionRelation',
    'SubsumptionStrategy',

    # Graph models
    'ENTRY',
    'EXIT',
    'TransitionGraph',
    'edge_key',
    'vertex_key',

    # Report models
    'CoverageDimension',
    'CoverageReport',
    'DimensionCoverage',

    # Statechart models
    'SENTINELS',
    'State',
    'StateKind',
    'Statechart',
    'Transition',
    'TransitionKind',
    'Violation',
    'natural_key',
    'sequence_key',

    # Suite models
    'NO_ENABLED_TRANSITION',
    'CoveringWalk',
    'ExecTrace',
    'FalseTransitionPair',
    'FaultyPair',
    'InputEvent',
    'StepResult',
    'SuiteProvenance',
    'TestCase',
    'TestSuite',
    'Verdict',
]
