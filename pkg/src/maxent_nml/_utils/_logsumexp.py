from __future__ import annotations

import math

import numpy as np

from .._types import FloatArray


class LogSumExp:
    """Streaming log-sum-exp accumulator.

    Chunks may arrive in any size; the value only depends on the order in which
    they are added, so callers that merge partial results must add them in a fixed order.
    """

    def __init__(self) -> None:
        self._shift = -math.inf
        self._scaled = 0.0

    def add(self, values: FloatArray | float) -> None:
        arr = np.atleast_1d(np.asarray(values, dtype=np.float64))
        if arr.size == 0:
            return
        top = float(arr.max())
        if top == -math.inf:
            return
        if top > self._shift:
            self._scaled *= math.exp(self._shift - top) if self._shift > -math.inf else 0.0
            self._shift = top
        self._scaled += float(np.exp(arr - self._shift).sum())

    def merge(self, other: LogSumExp) -> None:
        if other._shift == -math.inf:
            return
        self.add(other._shift + math.log(other._scaled))

    @property
    def value(self) -> float:
        if self._scaled == 0.0:
            return -math.inf
        return self._shift + math.log(self._scaled)
