from typing import Any
import logging
import traceback
from datetime import datetime, timezone

class BaseAppError(Exception):
    def __init__(self, message: str, context: dict[str, Any] | None = None):
        self.message = message
        self.context = context or {}
        self.timestamp = datetime.now(timezone.utc).isoformat()
        super().__init__(self.message)
        self._log_error()

    def _log_error(self):
        logger = logging.getLogger(__name__)
        logger.error(
            f"{self.__class__.__name__}: {self.message}",
            extra={
                "exception_type": self.__class__.__name__,
                "exception_message": self.message,
                "context": self.context,
                "timestamp": self.timestamp,
                "stack_trace": traceback.format_exc()
            }
        )

class NetworkValidationError(BaseAppError):
    def __init__(self, message: str, violations: list[str] | None = None, context: dict[str, Any] | None = None):
        self.violations = violations or []
        context = context or {}
        context.update({"violations": self.violations})
        super().__init__(message, context)

class ParseError(BaseAppError):
    KINDS = ("syntax", "unknown-species-policy", "bad-rate", "self-loop")

    def __init__(self, message: str, span, kind: str = "syntax", context: dict[str, Any] | None = None):
        if kind not in self.KINDS:
            raise ValueError(f"Unknown parse error kind: {kind}")
        self.span = span
        self.kind = kind
        context = context or {}
        context.update({
            "kind": kind,
            "line": span.line,
            "column": span.column,
            "length": span.length
        })
        super().__init__(message or "parse error", context)

    def __str__(self) -> str:
        return f"{self.span.line}:{self.span.column}: {self.kind}: {self.message}"

class LatticeError(BaseAppError):
    pass

class NotOneDimensionalError(BaseAppError):
    def __init__(self, message: str, dimension: int, context: dict[str, Any] | None = None):
        self.dimension = dimension
        context = context or {}
        context.update({"span_dimension": dimension})
        super().__init__(message, context)

class HypothesisViolationError(BaseAppError):
    def __init__(
            self,
            message: str,
            hypothesis: str,
            suggested_order: list[str] | None = None,
            context: dict[str, Any] | None = None
    ):
        self.hypothesis = hypothesis
        self.suggested_order = suggested_order
        context = context or {}
        context.update({
            "hypothesis": hypothesis,
            "suggested_order": suggested_order
        })
        super().__init__(message, context)

class CoreSearchCapError(BaseAppError):
    pass

class InsufficientSupportError(BaseAppError):
    pass

class NotBirthDeathError(BaseAppError):
    pass

class ParticleExtinctionError(BaseAppError):
    pass

class InconsistencyError(BaseAppError):
    def __init__(self, message: str, violations: list[str], context: dict[str, Any] | None = None):
        self.violations = violations
        context = context or {}
        context.update({"violations": violations})
        super().__init__(message, context)

class InfrastructureError(BaseAppError):
    def __init__(self, message: str, original_error: Exception | None = None, context: dict[str, Any] | None = None):
        self.original_error = original_error
        context = context or {}
        if original_error:
            context.update({
                "original_error_type": original_error.__class__.__name__,
                "original_error_message": str(original_error)
            })
        super().__init__(message, context)

class AnalysisError(InfrastructureError):
    pass

class WindowError(BaseAppError):
    def __init__(self, message: str, state=None, bounds=None, context: dict[str, Any] | None = None):
        context = context or {}
        context.update({"state": state, "bounds": bounds})
        super().__init__(message, context)

class SimulationParameterError(BaseAppError):
    def __init__(self, message: str, parameter: str, value=None, context: dict[str, Any] | None = None):
        self.parameter = parameter
        context = context or {}
        context.update({"parameter": parameter, "value": value})
        super().__init__(message, context)
