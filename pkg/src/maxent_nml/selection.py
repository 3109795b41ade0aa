from __future__ import annotations

import re
import logging
from typing import List, Tuple, Union, Optional, Sequence

from joblib import Parallel, delayed

from .types import Sample, Candidate, CandidateSet, CandidateScore, SelectionResult, CodelengthReport
from ._types import IntArray, Criterion, CompMethod
from .maxent import fit_maxent, empirical_moments
from .codelength import nml_codelength
from ._constants import TIE_TOLERANCE, DEFAULT_MC_DRAWS
from ._exceptions import MaxEntNMLError, SelectionError, InvalidInputError
from .discriminative import cond_nml, cond_err_codelength

__all__ = ["select_by_nml", "select_by_minimax"]

log: logging.Logger = logging.getLogger(__name__)

Labels = Optional[Union[Sequence[int], IntArray]]


def _entropy_codelength(candidate: Candidate, sample: Sample, labels: Labels) -> float:
    """n times the maximum (conditional) entropy of the candidate's fit."""
    if candidate.conditional:
        assert labels is not None
        return cond_err_codelength(candidate.features, sample, labels)  # type: ignore[arg-type]
    features = candidate.features
    return sample.n * fit_maxent(features, empirical_moments(sample, features)).entropy_nats  # type: ignore[arg-type]


def _score(
    candidate: Candidate,
    sample: Sample,
    labels: Labels,
    criterion: Criterion,
    method: CompMethod,
    comp_override: Optional[float],
    draws: int,
    seed: int,
) -> Union[CandidateScore, str]:
    try:
        if criterion == "minimax":
            err = _entropy_codelength(candidate, sample, labels)
            return CandidateScore(
                id=candidate.id, num_features=candidate.num_features, score_nats=err, entropy_nats=err / sample.n
            )

        if comp_override is not None:
            err = _entropy_codelength(candidate, sample, labels)
            report = CodelengthReport.combine(
                err, comp_override, method="injected", n=sample.n, num_features=candidate.num_features
            )
        elif candidate.conditional:
            assert labels is not None
            report = cond_nml(
                candidate.features, sample, labels, method, draws=draws, seed=seed  # type: ignore[arg-type]
            )
        else:
            report = nml_codelength(
                candidate.features, sample, method, draws=draws, seed=seed  # type: ignore[arg-type]
            )
        return CandidateScore(
            id=candidate.id,
            num_features=candidate.num_features,
            score_nats=report.nml_nats,
            entropy_nats=report.err_nats / sample.n,
            report=report,
        )
    except MaxEntNMLError as err:
        log.info("candidate %s failed: %s", candidate.id, err)
        return str(err)


def _natural_key(text: str) -> Tuple[Union[str, int], ...]:
    """Digit runs compare as numbers, so `m=2` sorts before `m=10`."""
    return tuple(int(part) if i % 2 else part for i, part in enumerate(re.split(r"(\d+)", text)))


def _choose(rows: List[CandidateScore]) -> str:
    """Lowest score; scores within the tie tolerance of it go to fewer features, then the lower id."""
    best = min(row.score_nats for row in rows)
    tied = [row for row in rows if row.score_nats <= best + TIE_TOLERANCE]
    return min(tied, key=lambda row: (row.num_features, _natural_key(row.id))).id


def _select(
    candidates: CandidateSet,
    sample: Sample,
    labels: Labels,
    criterion: Criterion,
    *,
    method: CompMethod = "types",
    comp_override: Optional[float] = None,
    draws: int = DEFAULT_MC_DRAWS,
    seed: int = 0,
    workers: int = 1,
) -> SelectionResult:
    if candidates.conditional and labels is None:
        raise InvalidInputError("Conditional candidates need the label sequence")

    jobs = (
        delayed(_score)(candidate, sample, labels, criterion, method, comp_override, draws, seed)
        for candidate in candidates.candidates
    )
    if workers > 1:
        outcomes = Parallel(n_jobs=workers)(jobs)
    else:
        outcomes = [func(*args, **kwargs) for func, args, kwargs in jobs]

    rows: List[CandidateScore] = []
    failures = {}
    for candidate, outcome in zip(candidates.candidates, outcomes):
        if isinstance(outcome, str):
            failures[candidate.id] = outcome
        else:
            rows.append(outcome)
    if not rows:
        raise SelectionError(failures)

    chosen = _choose(rows)
    log.debug("%s selection chose %s among %d candidates", criterion, chosen, len(rows))
    return SelectionResult(criterion=criterion, rows=rows, chosen_id=chosen, failures=failures)


def select_by_nml(
    candidates: CandidateSet,
    sample: Sample,
    method: CompMethod = "types",
    *,
    labels: Labels = None,
    comp_override: Optional[float] = None,
    draws: int = DEFAULT_MC_DRAWS,
    seed: int = 0,
    workers: int = 1,
) -> SelectionResult:
    """Choose the candidate feature table with the smallest NML codelength.

    For conditional candidates `sample` holds the symbols and `labels` the coded
    classes. Passing `comp_override` charges every candidate the same complexity,
    which reduces the choice to the minimax entropy one.
    """
    return _select(
        candidates,
        sample,
        labels,
        "nml",
        method=method,
        comp_override=comp_override,
        draws=draws,
        seed=seed,
        workers=workers,
    )


def select_by_minimax(
    candidates: CandidateSet, sample: Sample, *, labels: Labels = None, workers: int = 1
) -> SelectionResult:
    """Choose the candidate whose maximum entropy fit has the smallest entropy; no COMP is computed."""
    return _select(candidates, sample, labels, "minimax", workers=workers)
