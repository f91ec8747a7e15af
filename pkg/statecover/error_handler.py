"""Centralized error handling and logging for statecover commands."""

import sys
import traceback
from typing import Any, Dict, Optional, TextIO

import structlog

from .exceptions import (
    EXIT_INPUT,
    ConfigurationError,
    ModelFileError,
    SemanticError,
    StatechartSyntaxError,
    StatecoverError,
    SuiteFormatError,
    SuiteTooLarge,
    ValidationFailed,
)

logger = structlog.get_logger(__name__)


class ErrorHandler:
    """Turn exceptions raised by a command into a log record, a message and an exit code."""

    def __init__(self, stream: Optional[TextIO] = None):
        self.stream = stream
        self.logger = logger

    def handle_command_error(self, error: Exception, command: str, arguments: Dict[str, Any]) -> int:
        """Log an error, print a one-line message to stderr and return the exit code."""
        self._log_error(error, command, arguments)
        print(self._format_error(error, command), file=self.stream or sys.stderr)
        if isinstance(error, StatecoverError):
            return error.exit_code
        return EXIT_INPUT

    def _log_error(self, error: Exception, command: str, arguments: Dict[str, Any]) -> None:
        log_context: Dict[str, Any] = {
            "command": command,
            "error_type": type(error).__name__,
            "error_message": str(error),
        }
        if arguments:
            log_context["argument_keys"] = sorted(arguments)
        if isinstance(error, StatecoverError) and error.context:
            log_context["error_context"] = error.context
        if isinstance(error, StatechartSyntaxError):
            log_context["span"] = str(error.span)
        if isinstance(error, SemanticError) and error.code:
            log_context["code"] = error.code

        if isinstance(error, (StatechartSyntaxError, SuiteFormatError, ModelFileError, ConfigurationError)):
            # bad input from the user
            self.logger.warning("Command input error", **log_context)
        elif isinstance(error, SuiteTooLarge):
            self.logger.warning("Command resource limit", **log_context)
        elif isinstance(error, StatecoverError):
            self.logger.error("Command failed", **log_context)
        else:
            log_context["traceback"] = traceback.format_exc()
            self.logger.error("Command unexpected error", **log_context)

    def _format_error(self, error: Exception, command: str) -> str:
        if isinstance(error, ValidationFailed):
            listing = "\n".join(f"  {v}: {getattr(v, 'message', '')}".rstrip(": ") for v in error.violations)
            return f"{command}: statechart is not well-formed\n{listing}"
        if isinstance(error, StatecoverError):
            return f"{command}: {error}"
        return f"{command}: unexpected {type(error).__name__}: {error}"
