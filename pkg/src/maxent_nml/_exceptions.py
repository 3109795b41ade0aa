from __future__ import annotations

from typing import Mapping, Optional, Sequence
from typing_extensions import Literal

__all__ = [
    "MaxEntNMLError",
    "InvalidInputError",
    "FeatureRangeError",
    "InfeasibleConstraintsError",
    "ConvergenceError",
    "CapExceededError",
    "ParseError",
    "LabelMismatchError",
    "EmptyResultError",
    "SelectionError",
]


class MaxEntNMLError(Exception):
    exit_code: int = 70


class InvalidInputError(MaxEntNMLError):
    exit_code: Literal[6] = 6  # pyright: ignore[reportIncompatibleVariableOverride]


class FeatureRangeError(InvalidInputError):
    """Raised when a feature value cannot be represented as a finite float."""


class InfeasibleConstraintsError(MaxEntNMLError):
    """Raised when the requested moments lie outside the moment polytope."""

    exit_code: Literal[3] = 3  # pyright: ignore[reportIncompatibleVariableOverride]

    moments: Sequence[float]
    slack: float
    """Smallest uniform violation of the moment equalities that any distribution achieves."""

    def __init__(self, message: str, *, moments: Sequence[float], slack: float) -> None:
        super().__init__(message)
        self.moments = list(moments)
        self.slack = slack


class ConvergenceError(MaxEntNMLError):
    exit_code: Literal[5] = 5  # pyright: ignore[reportIncompatibleVariableOverride]

    residual: float
    """Largest moment residual, in feature units, when the solver gave up."""

    iterations: int

    def __init__(self, message: str, *, residual: float, iterations: int) -> None:
        super().__init__(f"{message} (residual={residual:.3e} after {iterations} iterations)")
        self.residual = residual
        self.iterations = iterations


class CapExceededError(MaxEntNMLError):
    exit_code: Literal[4] = 4  # pyright: ignore[reportIncompatibleVariableOverride]

    size: int
    cap: int
    suggestion: Optional[str]

    def __init__(self, message: str, *, size: int, cap: int, suggestion: str | None = None) -> None:
        text = f"{message}: {size} exceeds the cap of {cap}"
        if suggestion is not None:
            text = f"{text}; {suggestion}"
        super().__init__(text)
        self.size = size
        self.cap = cap
        self.suggestion = suggestion


class ParseError(MaxEntNMLError):
    exit_code: Literal[2] = 2  # pyright: ignore[reportIncompatibleVariableOverride]

    path: str
    line: Optional[int]
    column: Optional[int]

    def __init__(self, message: str, *, path: str, line: int | None = None, column: int | None = None) -> None:
        location = path
        if line is not None:
            location = f"{location}:{line}"
            if column is not None:
                location = f"{location}:{column}"
        super().__init__(f"{location}: {message}")
        self.path = path
        self.line = line
        self.column = column


class LabelMismatchError(ParseError):
    sample_id: Optional[str]

    def __init__(self, message: str, *, path: str, sample_id: str | None = None) -> None:
        super().__init__(message, path=path)
        self.sample_id = sample_id


class EmptyResultError(MaxEntNMLError):
    exit_code: Literal[7] = 7  # pyright: ignore[reportIncompatibleVariableOverride]


class SelectionError(MaxEntNMLError):
    exit_code: Literal[8] = 8  # pyright: ignore[reportIncompatibleVariableOverride]

    failures: Mapping[str, str]
    """Candidate id to the message of the error that candidate raised."""

    def __init__(self, failures: Mapping[str, str]) -> None:
        detail = "; ".join(f"{key}: {value}" for key, value in failures.items())
        super().__init__(f"Every candidate failed to evaluate ({detail})")
        self.failures = dict(failures)
