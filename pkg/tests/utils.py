from __future__ import annotations

import os
import math
import contextlib
from typing import Iterator, Sequence

import numpy as np
from scipy import special

from maxent_nml.types import Sample


@contextlib.contextmanager
def update_env(**new_env: str) -> Iterator[None]:
    old = os.environ.copy()

    try:
        os.environ.update(new_env)

        yield None
    finally:
        os.environ.clear()
        os.environ.update(old)


def bernoulli_entropy(p: float) -> float:
    if p in (0.0, 1.0):
        return 0.0
    return -(p * math.log(p) + (1.0 - p) * math.log(1.0 - p))


def multinomial_comp(n: int, size: int) -> float:
    """ln of the multinomial Shtarkov sum, by direct summation over types."""
    total = -math.inf
    for counts in _types(n, size):
        c = np.asarray(counts, dtype=np.float64)
        positive = c[c > 0]
        term = special.gammaln(n + 1) - special.gammaln(c + 1).sum() + (positive * np.log(positive / n)).sum()
        total = np.logaddexp(total, term)
    return float(total)


def _types(n: int, size: int) -> Iterator[Sequence[int]]:
    if size == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _types(n - first, size - 1):
            yield (first, *rest)


def sample_of(*indices: int) -> Sample:
    return Sample.of(list(indices))
