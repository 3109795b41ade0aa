from __future__ import annotations

import logging
from typing import List, Sequence

import numpy as np

from ..types import ExpressionMatrix
from .._types import SplitTag
from .._exceptions import InvalidInputError

__all__ = ["make_synthetic_matrix"]

log: logging.Logger = logging.getLogger(__name__)


def make_synthetic_matrix(
    num_informative: int = 10,
    num_noise: int = 40,
    train_sizes: Sequence[int] = (27, 11),
    test_sizes: Sequence[int] = (20, 14),
    *,
    class_names: Sequence[str] = ("ALL", "AML"),
    seed: int = 0,
    center: float = 3.0,
    separation: float = 0.8,
    spread: float = 0.15,
    noise_spread: float = 0.4,
) -> ExpressionMatrix:
    """Two-class expression matrix in raw intensity units.

    log10 intensities of an informative gene are N(center, spread) for the first
    class. Second-class samples alternate between N(center - separation, spread)
    and N(center + separation, spread) within each split, so the class sits in
    both tails in equal shares and no single threshold separates the classes
    while a second moment does. Consecutive informative genes start on opposite
    tails. Noise genes are N(center, noise_spread) for every sample. Informative
    genes come first (`INF0000`, ...), then noise genes (`NOISE0000`, ...).
    Columns are shuffled.
    """
    if len(class_names) != 2 or len(train_sizes) != 2 or len(test_sizes) != 2:
        raise InvalidInputError("The synthetic generator produces exactly two classes")
    if min(train_sizes) < 1 or min(test_sizes) < 0 or num_informative + num_noise < 1:
        raise InvalidInputError("Every class needs train samples and the matrix at least one gene")

    rng = np.random.default_rng(seed)
    labels: List[int] = []
    split: List[SplitTag] = []
    for tag, sizes in (("train", train_sizes), ("test", test_sizes)):
        for label, size in enumerate(sizes):
            labels.extend([label] * size)
            split.extend([tag] * size)  # type: ignore[list-item]
    order = rng.permutation(len(labels))
    y = np.asarray(labels)[order]
    split = [split[i] for i in order.tolist()]
    n = y.size

    tags = np.asarray(split)
    side = np.zeros(n)
    for tag in ("train", "test"):
        members = np.flatnonzero((y == 1) & (tags == tag))
        side[members] = np.where(np.arange(members.size) % 2 == 0, -1.0, 1.0)
    start = np.where(np.arange(num_informative) % 2 == 0, 1.0, -1.0)

    informative = rng.normal(center, spread, size=(num_informative, n))
    informative += start[:, None] * side * separation
    noise = rng.normal(center, noise_spread, size=(num_noise, n))
    values = np.power(10.0, np.vstack([informative, noise]))

    names = sorted(class_names)
    remap = [names.index(class_names[0]), names.index(class_names[1])]
    log.debug("synthetic matrix: %d informative and %d noise genes over %d samples", num_informative, num_noise, n)
    return ExpressionMatrix(
        gene_ids=[f"INF{i:04d}" for i in range(num_informative)] + [f"NOISE{i:04d}" for i in range(num_noise)],
        sample_ids=[f"S{i:03d}" for i in range(n)],
        values=values,
        labels=[remap[label] for label in y.tolist()],
        class_names=names,
        split=split,
    )
