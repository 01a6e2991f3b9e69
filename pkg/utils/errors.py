"""
Exception hierarchy shared by every layer.

Numerical code raises, the runner catches per sweep point and keeps going.
"""

from typing import Any, Optional


class CoverageError(Exception):
    """Base class for all engine errors"""

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_record(self) -> dict:
        """Machine-readable form for the CLI error channel"""
        record = {'status': 'error', 'error': type(self).__name__, 'message': self.message}
        for key, value in self.details.items():
            if value is not None:
                record[key] = value
        return record


class DomainError(CoverageError, ValueError):
    """Argument outside the domain of a function or model"""


class ConvergenceError(CoverageError, ArithmeticError):
    """Series or quadrature did not meet its tolerance"""

    def __init__(self, message: str, achieved_error: Optional[float] = None,
                 partial_result: Optional[float] = None, **details: Any):
        super().__init__(message, achieved_error=achieved_error,
                         partial_result=partial_result, **details)
        self.achieved_error = achieved_error
        self.partial_result = partial_result


class RegimeError(CoverageError, ValueError):
    """Massive-MIMO regime violated (M <= min(N_s, S_max))"""


class AssumptionError(CoverageError, ValueError):
    """A closed form was requested outside its stated assumptions"""


class DegenerateTopologyError(CoverageError):
    """A sampled drop has no SBS or no CN inside the region"""


class ConfigError(CoverageError, ValueError):
    """Run configuration could not be parsed or validated"""

    def __init__(self, message: str, field: Optional[str] = None,
                 line: Optional[int] = None, **details: Any):
        super().__init__(message, field=field, line=line, **details)
        self.field = field
        self.line = line


def require(condition: bool, message: str, exc: type = DomainError, **details: Any) -> None:
    """Raise `exc` with `message` unless `condition` holds"""
    if not condition:
        raise exc(message, **details)


__all__ = [
    'CoverageError',
    'DomainError',
    'ConvergenceError',
    'RegimeError',
    'AssumptionError',
    'DegenerateTopologyError',
    'ConfigError',
    'require',
]
