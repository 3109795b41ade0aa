from __future__ import annotations

import math
import hashlib
import itertools
from typing import Iterator
from pathlib import Path

import numpy as np
from scipy import special

from .._types import IntArray, FloatArray


def log_multinomial(counts: FloatArray | np.ndarray) -> FloatArray:
    """ln(n! / prod_j counts_j!) along the last axis."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum(axis=-1)
    return np.asarray(special.gammaln(total + 1.0) - special.gammaln(counts + 1.0).sum(axis=-1), dtype=np.float64)


def entropy_of(log_probs: FloatArray, axis: int = -1) -> FloatArray:
    """-sum p ln p along `axis`, with 0 ln 0 = 0 for entries whose log-probability is -inf."""
    probs = np.exp(log_probs)
    terms = np.where(probs > 0.0, probs * np.where(np.isfinite(log_probs), log_probs, 0.0), 0.0)
    return np.asarray(-terms.sum(axis=axis), dtype=np.float64)


def file_digest(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def parse_int_range(text: str) -> list[int]:
    """Parse `1..7`, `0,2,4` or `3` into an ascending list of integers."""
    values: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            values.extend(range(int(lo), int(hi) + 1))
        else:
            values.append(int(part))
    if not values:
        raise ValueError(f"empty range: {text!r}")
    return sorted(set(values))


def compositions(total: int, parts: int, chunk: int) -> Iterator[IntArray]:
    """Compositions of `total` into `parts` non-negative counts in lexicographic order, `chunk` rows at a time."""
    if parts == 1:
        yield np.array([[total]], dtype=np.int64)
        return
    slots = total + parts - 1
    bars = itertools.combinations(range(slots), parts - 1)
    while True:
        block = np.array(list(itertools.islice(bars, chunk)), dtype=np.int64)
        if block.size == 0:
            return
        edges = np.hstack([np.full((block.shape[0], 1), -1), block, np.full((block.shape[0], 1), slots)])
        yield np.diff(edges, axis=1) - 1


def mc_log_mean(log_terms: FloatArray, offset: float) -> tuple[float, float]:
    """offset + ln mean(exp(log_terms)), with the delta-method standard error of that log estimate."""
    draws = log_terms.size
    top = float(log_terms.max())
    scaled = np.exp(log_terms - top)
    mean = float(scaled.mean())
    stderr = float(scaled.std(ddof=1)) / (mean * math.sqrt(draws))
    return offset + top + math.log(mean), stderr
