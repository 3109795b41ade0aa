from __future__ import annotations

from typing import Dict, List, Optional

from .._types import Criterion
from .._models import BaseModel
from .._exceptions import InvalidInputError
from .codelength_report import CodelengthReport

__all__ = ["CandidateScore", "SelectionResult"]


class CandidateScore(BaseModel):
    id: str

    num_features: int

    score_nats: float
    """Value of the selection criterion: the NML codelength, or n times the fitted entropy for minimax."""

    entropy_nats: float
    """Maximum (conditional) entropy of the candidate's fit to the sample."""

    report: Optional[CodelengthReport] = None
    """Full ERR / COMP / NML breakdown; absent for minimax selection."""


class SelectionResult(BaseModel):
    criterion: Criterion

    rows: List[CandidateScore]
    """One row per candidate that could be evaluated, in candidate-set order."""

    chosen_id: str

    failures: Dict[str, str] = {}
    """Candidates that could not be evaluated, with the reason."""

    def _check(self) -> None:
        if self.chosen_id not in {row.id for row in self.rows}:
            raise InvalidInputError(f"Chosen candidate {self.chosen_id!r} is not among the scored rows")

    @property
    def chosen(self) -> CandidateScore:
        return next(row for row in self.rows if row.id == self.chosen_id)
