from __future__ import annotations

import logging
from typing import List, Iterable, Optional

import numpy as np

from ._config import PipelineConfig
from ..types import SweepRow, SweepResult, ExpressionMatrix
from .._types import SplitTag
from .._compat import model_copy
from ._ranking import rank_genes
from ._classifier import evaluate, build_classifier
from .._exceptions import MaxEntNMLError, InvalidInputError

__all__ = ["quantization_sweep"]

log: logging.Logger = logging.getLogger(__name__)


def quantization_sweep(
    matrix: ExpressionMatrix,
    config: PipelineConfig | None = None,
    level_range: Iterable[int] = range(2, 9),
    *,
    split: Optional[SplitTag] = None,
    progress: bool = False,
) -> SweepResult:
    """Mean minimum NML of the top genes and classifier accuracy for every level count.

    Genes are re-ranked at each level count. Accuracy is measured on the test
    columns when there are any, otherwise on the train columns.
    """
    config = config or PipelineConfig()
    if split is None:
        split = "test" if matrix.mask("test").any() else "train"

    rows: List[SweepRow] = []
    for levels in level_range:
        level_config = model_copy(config, update={"levels": levels})
        try:
            ranking = rank_genes(matrix, level_config, progress=progress)
            top = ranking[: config.top_g]
            classifier = build_classifier(
                matrix, top, len(top), levels=levels, smoothing_floor=config.smoothing_floor
            )
            rows.append(
                SweepRow(
                    levels=levels,
                    mean_min_nml_nats=float(np.mean([selection.min_nml_nats for selection in top])),
                    accuracy=evaluate(classifier, matrix, split).accuracy,
                    num_genes=len(top),
                )
            )
        except MaxEntNMLError as err:
            log.warning("quantization into %d levels failed: %s", levels, err)
            rows.append(SweepRow(levels=levels, failure=str(err)))

    scored = [row for row in rows if row.mean_min_nml_nats is not None]
    if not scored:
        raise InvalidInputError("No level count of the sweep could be evaluated")
    nml_best = min(scored, key=lambda row: (row.mean_min_nml_nats, row.levels))
    accuracy_best = max(scored, key=lambda row: (row.accuracy or 0.0, -row.levels))
    return SweepResult(
        rows=rows,
        top_g=config.top_g,
        nml_argmin_levels=nml_best.levels,
        accuracy_argmax_levels=accuracy_best.levels,
    )
