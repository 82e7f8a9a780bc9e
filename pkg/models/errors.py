"""
Exception hierarchy shared by the library, the CLI and the HTTP API.

Every error carries the process exit code the CLI reports for it and the
HTTP status the API answers with.
"""

from typing import Any, Dict, List, Optional


class MLTError(Exception):
    """Base class for all matroidal Latin square errors"""

    exit_code = 1
    http_status = 400
    label = "Error"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        body = {"error": self.label, "message": self.message}
        if self.details:
            body["details"] = self.details
        return body


class InputError(MLTError):
    """Malformed ids, grids, parameters or non-Latin squares"""
    label = "Invalid input"


class UsageError(MLTError):
    """Bad command line or request parameters"""
    label = "Usage error"


class ParseError(MLTError):
    """Instance file could not be parsed"""
    label = "Parse error"


class ConfigError(MLTError):
    """Malformed environment configuration"""
    label = "Configuration error"


class ContractError(MLTError):
    """An operation was called with its preconditions violated"""
    label = "Contract violation"


class DomainError(MLTError):
    """An element lies outside the span an operation requires"""
    label = "Domain error"

    def __init__(self, message: str, element: Optional[int] = None, **details: Any):
        super().__init__(message, element=element, **details)
        self.element = element


class PreconditionError(MLTError):
    """Set family does not satisfy the covered-subset hypotheses"""
    label = "Precondition failed"


class ValidationError(MLTError):
    """Grid is not a matroidal Latin square"""

    exit_code = 2
    http_status = 422
    label = "Validation failed"

    def __init__(self, message: str, violations: Optional[List[Dict[str, Any]]] = None):
        super().__init__(message, violations=violations or [])
        self.violations = violations or []


class AnomalyError(MLTError):
    """A proven exchange failed its re-check"""

    exit_code = 3
    http_status = 409
    label = "Anomaly"


class TheoremViolation(MLTError):
    """A proven lower bound was contradicted by an exhaustive search"""

    exit_code = 3
    http_status = 409
    label = "Theorem violation"
