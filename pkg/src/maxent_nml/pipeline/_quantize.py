from __future__ import annotations

import logging
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from ..types import Sample, Quantization, ExpressionMatrix
from .._types import IntArray, BoolArray, FloatArray, QuantizeMethod
from .._exceptions import InvalidInputError

__all__ = ["quantize", "apply_cut_points", "quantize_matrix"]

log: logging.Logger = logging.getLogger(__name__)


def apply_cut_points(values: Sequence[float] | FloatArray, cut_points: Sequence[float]) -> IntArray:
    """Level of each value for right-closed bins (-inf, c_1], (c_1, c_2], ..., (c_last, inf)."""
    return np.searchsorted(np.asarray(cut_points, dtype=np.float64), np.asarray(values, dtype=np.float64), side="left")


def quantize(
    values: Sequence[float] | FloatArray,
    levels: int,
    method: QuantizeMethod = "quantile",
    *,
    train_mask: Optional[Sequence[bool] | BoolArray] = None,
) -> Quantization:
    """Map values to levels 0..levels-1 with cut points learnt from the train values only.

    `quantile` cuts at equal-frequency points, `width` at equally spaced points
    between the train minimum and maximum. Tied quantiles collapse, so fewer
    than `levels` levels may be used.
    """
    x = np.asarray(values, dtype=np.float64)
    if levels < 2:
        raise InvalidInputError(f"Quantization needs at least 2 levels, got {levels}")
    train = x if train_mask is None else x[np.asarray(train_mask, dtype=bool)]
    if train.size == 0:
        raise InvalidInputError("Quantization needs at least one train value")

    if train.max() == train.min():
        log.warning("constant values over the train columns; every value maps to level 0")
        return Quantization(
            sample=Sample.of(np.zeros(x.size, dtype=np.int64)),
            levels=levels,
            method=method,
            cut_points=[],
            constant=True,
        )

    if method == "quantile":
        if train.size < levels:
            raise InvalidInputError(f"Quantile quantization into {levels} levels needs >= {levels} train values")
        _, edges = pd.qcut(train, q=levels, retbins=True, duplicates="drop")
        cut_points = np.asarray(edges[1:-1], dtype=np.float64)
    elif method == "width":
        cut_points = np.linspace(train.min(), train.max(), levels + 1)[1:-1]
    else:
        raise InvalidInputError(f"Unknown quantization method {method!r}")

    return Quantization(
        sample=Sample.of(apply_cut_points(x, cut_points)),
        levels=levels,
        method=method,
        cut_points=cut_points.tolist(),
    )


def quantize_matrix(
    matrix: ExpressionMatrix, levels: int, method: QuantizeMethod = "quantile"
) -> tuple[IntArray, List[Quantization]]:
    """Quantize every gene row with cut points from its train columns; returns (levels array, per-gene results)."""
    train = matrix.mask("train")
    results = [quantize(row, levels, method, train_mask=train) for row in np.asarray(matrix.values)]
    return np.vstack([result.sample.as_array() for result in results]), results
