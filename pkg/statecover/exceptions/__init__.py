"""Custom exception classes for statecover."""

from typing import Any, Dict, List, NamedTuple, Optional

# Process exit codes shared by the command line front end.
EXIT_OK = 0
EXIT_INPUT = 1
EXIT_SEMANTIC = 2
EXIT_RESOURCE = 3


class SourceSpan(NamedTuple):
    """Location of offending source text; line and column are 1-based."""

    line: int
    column: int
    length: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class StatecoverError(Exception):
    """Base exception for all statecover operations.

    Every subclass carries a class-level ``exit_code`` so the command line
    front end can map any failure to the documented exit-code contract.
    """

    exit_code: int = EXIT_SEMANTIC

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        """Initialize the exception with a message and optional context.

        Args:
            message: Human-readable error message
            context: Optional dictionary containing additional error context
        """
        super().__init__(message)
        self.message = message
        self.context = context or {}

    def __str__(self) -> str:
        """Return string representation of the exception."""
        if self.context:
            context_str = ", ".join(f"{k}={v}" for k, v in self.context.items())
            return f"{self.message} (Context: {context_str})"
        return self.message

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary for serialization."""
        return {
            "error_type": self.__class__.__name__,
            "message": self.message,
            "context": self.context,
        }


class StatechartSyntaxError(StatecoverError):
    """Raised when statechart DSL or guard text cannot be parsed.

    The span points at the offending text: 1-based line and column plus the
    number of characters involved.
    """

    exit_code = EXIT_INPUT

    def __init__(
        self,
        message: str,
        line: int = 1,
        column: int = 1,
        length: int = 0,
        context: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message, context)
        self.span = SourceSpan(max(1, line), max(1, column), max(0, length))

    @property
    def line(self) -> int:
        return self.span.line

    @property
    def column(self) -> int:
        return self.span.column

    def __str__(self) -> str:
        return f"{self.span}: {super().__str__()}"

    def to_dict(self) -> Dict[str, Any]:
        result = super().to_dict()
        result["span"] = self.span._asdict()
        return result


class SemanticError(StatecoverError):
    """Raised when a model is well-formed text but names things inconsistently.

    This exception is raised when:
    - A transition refers to an unknown state or event
    - An identifier is declared twice
    - More than one state is declared initial
    """

    def __init__(
        self,
        message: str,
        code: Optional[str] = None,
        line: Optional[int] = None,
        context: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message, context)
        self.code = code
        self.line = line

    def __str__(self) -> str:
        base_str = super().__str__()
        if self.line is not None:
            return f"{self.line}: {base_str}"
        return base_str

    def to_dict(self) -> Dict[str, Any]:
        result = super().to_dict()
        if self.code:
            result["code"] = self.code
        if self.line is not None:
            result["line"] = self.line
        return result


class ValidationFailed(SemanticError):
    """Raised when a statechart breaks its well-formedness rules."""

    def __init__(self, violations: List[Any], context: Optional[Dict[str, Any]] = None):
        listing = ", ".join(str(v) for v in violations)
        super().__init__(f"Statechart is not well-formed: {listing}", code="invalid-model", context=context)
        self.violations = list(violations)


class UnknownState(SemanticError):
    """Raised when an operation names a state the machine does not have."""

    def __init__(self, state_id: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(f"Unknown state '{state_id}'", code="unknown-state", context=context)
        self.state_id = state_id


class UnreachableState(SemanticError):
    """Raised when no legal transition sequence leads to a state."""

    def __init__(self, state_id: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(
            f"State '{state_id}' is not reachable from the initial state",
            code="unreachable",
            context=context,
        )
        self.state_id = state_id


class OrthogonalRegionUnsupported(SemanticError):
    """Raised when flattening meets a composite state with several entry children."""

    def __init__(self, state_id: str, entries: List[str]):
        super().__init__(
            f"Composite state '{state_id}' declares {len(entries)} entry children; "
            "orthogonal regions are not supported",
            code="orthogonal-region",
            context={"entries": ",".join(entries)},
        )
        self.state_id = state_id


class UnboundVariable(SemanticError):
    """Raised when a guard is evaluated without a binding for one of its variables."""

    def __init__(self, variable: str, guard: Optional[str] = None):
        context = {"guard": guard} if guard else None
        super().__init__(f"Variable '{variable}' is not bound", code="unbound-variable", context=context)
        self.variable = variable


class NondeterministicModel(SemanticError):
    """Raised when more than one transition is enabled by the same input."""

    def __init__(self, state_id: str, event: str, transitions: List[str]):
        super().__init__(
            f"Event '{event}' enables {len(transitions)} transitions in state '{state_id}'",
            code="nondeterministic",
            context={"transitions": ",".join(transitions)},
        )
        self.state_id = state_id
        self.event = event
        self.transitions = list(transitions)


class GuardUnsatisfiable(SemanticError):
    """Raised when no boundary binding drives a guard to the wanted value."""

    def __init__(self, transition_id: str, guard: str, wanted: bool):
        super().__init__(
            f"No binding makes guard [{guard}] of {transition_id} evaluate {str(wanted).lower()}",
            code="guard-unsatisfiable",
        )
        self.transition_id = transition_id


class EmptyGraph(SemanticError):
    """Raised when a sequence graph would contain no sequence vertices."""

    def __init__(self, k: int):
        super().__init__(f"No legal transition sequence of length {k} exists", code="empty-graph")
        self.k = k


class NotStronglyConnected(SemanticError):
    """Raised when a covering walk is requested on a graph that is not strongly connected."""

    def __init__(self, unreachable: List[str]):
        super().__init__(
            "Transition graph is not strongly connected",
            code="not-strongly-connected",
            context={"vertices": ",".join(unreachable)},
        )
        self.unreachable = list(unreachable)


class InvalidParameter(SemanticError):
    """Raised when an operation parameter is out of range."""

    def __init__(self, name: str, value: Any, expected: str):
        super().__init__(f"Invalid {name}={value!r}: expected {expected}", code="invalid-parameter")
        self.name = name
        self.value = value


class InvalidBound(InvalidParameter):
    """Raised when a path bound is not a positive integer."""

    def __init__(self, value: Any):
        super().__init__("path_bound", value, "an integer >= 1")


class EmptySuite(SemanticError):
    """Raised when an operation needs at least one test case."""

    def __init__(self, operation: str):
        super().__init__(f"{operation} needs a non-empty test suite", code="empty-suite")


class UnknownTestCase(SemanticError):
    """Raised when a test case id is not part of the suite."""

    def __init__(self, case_id: str):
        super().__init__(f"Unknown test case '{case_id}'", code="unknown-test-case")
        self.case_id = case_id


class SuiteInconsistent(SemanticError):
    """Raised when a test case does not match the model it is checked against."""

    def __init__(self, case_id: str, reason: str):
        super().__init__(f"Test case '{case_id}' is inconsistent with the model: {reason}", code="inconsistent")
        self.case_id = case_id
        self.reason = reason


class SuiteTooLarge(StatecoverError):
    """Raised when generation would exceed the configured suite cap."""

    exit_code = EXIT_RESOURCE

    def __init__(self, cap: int, operation: str):
        super().__init__(
            f"{operation} exceeds the suite cap of {cap} test cases",
            context={"cap": cap},
        )
        self.cap = cap


class SuiteFormatError(StatecoverError):
    """Raised when a suite document does not follow the JSON schema."""

    exit_code = EXIT_INPUT

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message, context)


class ModelFileError(StatecoverError):
    """Raised when an input or output file cannot be read or written."""

    exit_code = EXIT_INPUT

    def __init__(self, path: str, reason: str):
        super().__init__(f"Cannot access '{path}': {reason}")
        self.path = path


class ConfigurationError(StatecoverError):
    """Raised when configuration values are invalid.

    This exception is raised when:
    - An environment variable holds a value of the wrong type
    - The configuration file is missing or not a JSON object
    """

    exit_code = EXIT_INPUT

    def __init__(
        self,
        message: str,
        config_key: Optional[str] = None,
        config_value: Optional[str] = None,
        context: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message, context)
        self.config_key = config_key
        self.config_value = config_value

    def to_dict(self) -> Dict[str, Any]:
        result = super().to_dict()
        if self.config_key:
            result["config_key"] = self.config_key
        if self.config_value:
            result["config_value"] = self.config_value
        return result


__all__ = [
    "EXIT_OK",
    "EXIT_INPUT",
    "EXIT_SEMANTIC",
    "EXIT_RESOURCE",
    "SourceSpan",
    "StatecoverError",
    "StatechartSyntaxError",
    "SemanticError",
    "ValidationFailed",
    "UnknownState",
    "UnreachableState",
    "OrthogonalRegionUnsupported",
    "UnboundVariable",
    "NondeterministicModel",
    "GuardUnsatisfiable",
    "EmptyGraph",
    "NotStronglyConnected",
    "InvalidParameter",
    "InvalidBound",
    "EmptySuite",
    "UnknownTestCase",
    "SuiteInconsistent",
    "SuiteTooLarge",
    "SuiteFormatError",
    "ModelFileError",
    "ConfigurationError",
]
