"""
Error handling system for the Legendre duality toolkit.

Provides the exception hierarchy used by every computational module, centralized
logging of failures, user-facing messages and the mapping of failures to CLI exit
codes.
"""

import functools
import logging
import traceback
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Callable


class ErrorSeverity(Enum):
    """How loudly a failure is logged."""
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    CRITICAL = "critical"


class ErrorCategory(Enum):
    """What kind of failure occurred."""
    VALIDATION_ERROR = "validation_error"
    PARSE_ERROR = "parse_error"
    DOMAIN_ERROR = "domain_error"
    RANGE_ERROR = "range_error"
    SINGULARITY_ERROR = "singularity_error"
    CHART_ERROR = "chart_error"
    CONVEXITY_ERROR = "convexity_error"
    DUALITY_ERROR = "duality_error"
    CLAIRAUT_ERROR = "clairaut_error"
    CONTACT_ERROR = "contact_error"
    CONFIGURATION_ERROR = "configuration_error"
    RENDER_ERROR = "render_error"
    UNKNOWN_ERROR = "unknown_error"


# Categories caused by what the user typed rather than by the mathematics.
USAGE_CATEGORIES = frozenset({
    ErrorCategory.VALIDATION_ERROR,
    ErrorCategory.PARSE_ERROR,
    ErrorCategory.CONFIGURATION_ERROR,
})

EXIT_USAGE = 2
EXIT_COMPUTATION = 1

LOG_LEVELS = {
    ErrorSeverity.LOW: logging.INFO,
    ErrorSeverity.MEDIUM: logging.WARNING,
    ErrorSeverity.HIGH: logging.ERROR,
    ErrorSeverity.CRITICAL: logging.CRITICAL,
}

USER_MESSAGES = {
    ErrorCategory.VALIDATION_ERROR: "Invalid input",
    ErrorCategory.PARSE_ERROR: "Could not parse expression",
    ErrorCategory.DOMAIN_ERROR: "Expression evaluated outside its domain",
    ErrorCategory.RANGE_ERROR: "Parameter out of range",
    ErrorCategory.SINGULARITY_ERROR: "Singular point",
    ErrorCategory.CHART_ERROR: "Chart problem",
    ErrorCategory.CONVEXITY_ERROR: "Convexity requirement violated",
    ErrorCategory.DUALITY_ERROR: "Dual curve undefined",
    ErrorCategory.CLAIRAUT_ERROR: "Clairaut problem rejected",
    ErrorCategory.CONTACT_ERROR: "Not a contact map",
    ErrorCategory.CONFIGURATION_ERROR: "Configuration error",
    ErrorCategory.RENDER_ERROR: "Rendering failed",
    ErrorCategory.UNKNOWN_ERROR: "Unexpected error",
}


@dataclass
class ErrorContext:
    """The command (or library call) that was running, with its inputs."""
    operation: str
    request_data: dict[str, Any] | None = None
    additional_info: dict[str, Any] = field(default_factory=dict)


@dataclass
class ErrorRecord:
    """One handled failure, as kept in the handler history."""
    timestamp: datetime
    error_type: str
    error_message: str
    category: ErrorCategory
    severity: ErrorSeverity
    context: ErrorContext
    stack_trace: str | None = None
    user_message: str | None = None
    error_id: str | None = None


class ApplicationError(Exception):
    """
    Base class of every toolkit error.

    Subclasses fix ``category`` and ``severity`` as class attributes; the base class
    accepts explicit values for wrapping foreign exceptions.
    """
    category: ErrorCategory = ErrorCategory.UNKNOWN_ERROR
    severity: ErrorSeverity = ErrorSeverity.MEDIUM

    def __init__(self, message: str, category: ErrorCategory | None = None,
                 severity: ErrorSeverity | None = None, context: ErrorContext | None = None,
                 cause: Exception | None = None):
        super().__init__(message)
        self.message = message
        if category is not None:
            self.category = category
        if severity is not None:
            self.severity = severity
        self.context = context or ErrorContext(operation="unknown")
        self.cause = cause
        self.timestamp = datetime.now()


class ValidationError(ApplicationError):
    """Bad user input: numbers, names, sample counts, intervals."""
    category = ErrorCategory.VALIDATION_ERROR
    severity = ErrorSeverity.LOW

    def __init__(self, message: str, field_name: str | None = None, **kwargs):
        super().__init__(message, **kwargs)
        self.field_name = field_name


class ExpressionSyntaxError(ApplicationError):
    """Malformed expression text, with byte offset and expected tokens."""
    category = ErrorCategory.PARSE_ERROR
    severity = ErrorSeverity.LOW

    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset(), **kwargs):
        super().__init__(f"{message} at offset {offset}", **kwargs)
        self.offset = offset
        self.expected = expected


class UnknownIdentifierError(ExpressionSyntaxError):
    """Identifier that is neither a variable, a constant nor a function."""

    def __init__(self, name: str, offset: int, allowed: frozenset[str] = frozenset(), **kwargs):
        super().__init__(f"unknown identifier '{name}'", offset, allowed, **kwargs)
        self.name = name


class ExpressionDomainError(ApplicationError):
    """Evaluation left the natural domain of an expression."""
    category = ErrorCategory.DOMAIN_ERROR

    def __init__(self, message: str, subexpression: str | None = None, **kwargs):
        super().__init__(f"{message} in '{subexpression}'" if subexpression else message, **kwargs)
        self.subexpression = subexpression


class CurveRangeError(ApplicationError):
    """Parameter outside the interval of a curve."""
    category = ErrorCategory.RANGE_ERROR
    severity = ErrorSeverity.LOW

    def __init__(self, message: str, t: float | None = None, **kwargs):
        super().__init__(message, **kwargs)
        self.t = t


class SingularPointError(ApplicationError):
    """Operation requires a regular point but the velocity vanishes."""
    category = ErrorCategory.SINGULARITY_ERROR

    def __init__(self, message: str, t: float | None = None, hint: str | None = None, **kwargs):
        super().__init__(message if hint is None else f"{message} ({hint})", **kwargs)
        self.t = t
        self.hint = hint


class ChartError(ApplicationError):
    """Vertical tangent, escape to infinity or tangent line through the pole."""
    category = ErrorCategory.CHART_ERROR


class ConvexityError(ApplicationError):
    """Function is not strictly convex (or concave) where it must be."""
    category = ErrorCategory.CONVEXITY_ERROR

    def __init__(self, message: str, probe: float | None = None, **kwargs):
        super().__init__(message, **kwargs)
        self.probe = probe


class DualityError(ApplicationError):
    category = ErrorCategory.DUALITY_ERROR


class ClairautError(ApplicationError):
    category = ErrorCategory.CLAIRAUT_ERROR


class ContactError(ApplicationError):
    """Map fails the contact condition where a contact map is required."""
    category = ErrorCategory.CONTACT_ERROR

    def __init__(self, message: str, defect: float | None = None, **kwargs):
        super().__init__(message, **kwargs)
        self.defect = defect


class ConfigurationError(ApplicationError):
    category = ErrorCategory.CONFIGURATION_ERROR
    severity = ErrorSeverity.HIGH


class RenderError(ApplicationError):
    category = ErrorCategory.RENDER_ERROR


# Built-in exceptions that reach the handler, in lookup order.
_FOREIGN = (
    ((ValueError, TypeError), ErrorCategory.VALIDATION_ERROR, ErrorSeverity.LOW),
    ((ArithmeticError,), ErrorCategory.DOMAIN_ERROR, ErrorSeverity.MEDIUM),
    ((OSError,), ErrorCategory.RENDER_ERROR, ErrorSeverity.HIGH),
)


class ErrorHandler:
    """
    Records failures of CLI commands.

    Each handled error is classified, logged at a level derived from its severity,
    kept in a bounded history, counted per category and turned into a one-line
    message plus an exit code.
    """

    def __init__(self, logger_name: str = "src.errors", history_limit: int = 100):
        self.logger = logging.getLogger(logger_name)
        self.history_limit = history_limit
        self.error_history: list[ErrorRecord] = []
        self.error_counts: dict[ErrorCategory, int] = dict.fromkeys(ErrorCategory, 0)

    def handle_error(self, error: Exception, context: ErrorContext | None = None) -> tuple[str, int]:
        """
        Record and log an error.

        Args:
            error: The exception that occurred
            context: The operation that was running

        Returns:
            Tuple of (user_message, exit_code)
        """
        app_error = self.as_application_error(error, context)
        now = datetime.now()
        record = ErrorRecord(
            timestamp=now,
            error_type=type(error).__name__,
            error_message=str(error),
            category=app_error.category,
            severity=app_error.severity,
            context=context or app_error.context,
            stack_trace=traceback.format_exc(),
            user_message=self.user_message(app_error),
            error_id=f"ERR_{now:%Y%m%d_%H%M%S}_{len(self.error_history)}",
        )
        self._log(record)
        self.error_counts[record.category] += 1
        self.error_history = [*self.error_history, record][-self.history_limit:]
        return record.user_message, self.exit_code_for(app_error)

    @staticmethod
    def as_application_error(error: Exception, context: ErrorContext | None = None) -> ApplicationError:
        """Wrap built-in exceptions; toolkit errors pass through unchanged."""
        if isinstance(error, ApplicationError):
            return error
        for types, category, severity in _FOREIGN:
            if isinstance(error, types):
                if category is ErrorCategory.VALIDATION_ERROR:
                    return ValidationError(str(error), context=context, cause=error)
                return ApplicationError(str(error), category, severity, context=context, cause=error)
        return ApplicationError(str(error), ErrorCategory.UNKNOWN_ERROR, ErrorSeverity.HIGH,
                                context=context, cause=error)

    def describe(self, error: Exception) -> tuple[str, int]:
        """User message and exit code for an error, without recording it."""
        app_error = self.as_application_error(error)
        return self.user_message(app_error), self.exit_code_for(app_error)

    @staticmethod
    def exit_code_for(error: ApplicationError) -> int:
        return EXIT_USAGE if error.category in USAGE_CATEGORIES else EXIT_COMPUTATION

    @staticmethod
    def user_message(error: ApplicationError) -> str:
        message = f"{USER_MESSAGES[error.category]}: {error.message}"
        if isinstance(error, ExpressionSyntaxError) and error.expected:
            message += f" (expected one of: {', '.join(sorted(error.expected))})"
        return message

    def _log(self, record: ErrorRecord) -> None:
        self.logger.log(
            LOG_LEVELS[record.severity],
            f"[{record.error_id}] {record.category.name}: {record.error_message} "
            f"(operation {record.context.operation})",
        )
        if record.stack_trace and record.severity in (ErrorSeverity.HIGH, ErrorSeverity.CRITICAL):
            self.logger.debug(f"{record.error_id} traceback:\n{record.stack_trace}")

    def get_error_statistics(self) -> dict[str, Any]:
        return {
            "total_errors": sum(self.error_counts.values()),
            "errors_by_category": {c.value: n for c, n in self.error_counts.items() if n},
            "last_error": self.error_history[-1] if self.error_history else None,
        }

    def clear_error_history(self) -> None:
        self.error_history = []
        self.error_counts = dict.fromkeys(ErrorCategory, 0)


def handle_errors(error_handler: "ErrorHandler | None" = None, context: ErrorContext | None = None):
    """
    Decorator that records failures of a command handler and re-raises them.

    Args:
        error_handler: Handler to record into; the global one when omitted
        context: Operation context; defaults to the wrapped function's name
    """
    def decorator(func: Callable[..., Any]) -> Callable[..., Any]:
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except Exception as exc:
                (error_handler or global_error_handler).handle_error(
                    exc, context or ErrorContext(operation=func.__name__))
                raise

        return wrapper
    return decorator


global_error_handler = ErrorHandler()
