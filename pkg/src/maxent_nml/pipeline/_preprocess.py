from __future__ import annotations

import logging

import numpy as np

from ._config import PipelineConfig
from ..types import ExpressionMatrix
from .._exceptions import EmptyResultError, InvalidInputError

__all__ = ["preprocess"]

log: logging.Logger = logging.getLogger(__name__)


def preprocess(matrix: ExpressionMatrix, config: PipelineConfig | None = None) -> ExpressionMatrix:
    """Clamp raw intensities, drop genes with too little variation on the train columns, and take log10."""
    config = config or PipelineConfig()
    values = np.array(matrix.values, dtype=np.float64)
    gene_ids = list(matrix.gene_ids)

    if config.clamp:
        values = np.clip(values, config.clamp_floor, config.clamp_ceiling)

    if config.filter_genes:
        train = values[:, matrix.mask("train")]
        high = train.max(axis=1)
        low = train.min(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            fold = np.where(low > 0.0, high / np.where(low > 0.0, low, 1.0), np.inf)
        keep = (fold > config.min_fold_change) & (high - low > config.min_abs_range)
        log.info("variation filter kept %d of %d genes", int(keep.sum()), keep.size)
        values = values[keep]
        gene_ids = [gene for gene, kept in zip(gene_ids, keep.tolist()) if kept]

    if not gene_ids:
        raise EmptyResultError("Preprocessing removed every gene")

    if config.log_transform:
        if np.any(values <= 0.0):
            raise InvalidInputError("log10 transform needs positive values; enable clamping or filter the input")
        values = np.log10(values)

    return matrix.with_values(values, gene_ids)
