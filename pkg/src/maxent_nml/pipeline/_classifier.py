from __future__ import annotations

import logging
from typing import List, Iterable, Optional, Sequence

import numpy as np

from ..types import (
    Sample,
    Alphabet,
    ClassSet,
    GeneModel,
    CurvePoint,
    Prediction,
    GeneSelection,
    ExpressionMatrix,
    EvaluationReport,
    MaxEntClassifier,
)
from ..maxent import fit_maxent, empirical_moments, build_moment_features
from ..discriminative import cond_err_codelength, build_cond_moment_features
from .._types import IntArray, SplitTag
from ._quantize import apply_cut_points
from .._constants import DEFAULT_LEVELS, SMOOTHING_FLOOR
from .._exceptions import InvalidInputError

__all__ = ["build_classifier", "predict", "evaluate", "minimax_ranking", "classifier_curve"]

log: logging.Logger = logging.getLogger(__name__)


def _gene_index(matrix: ExpressionMatrix) -> dict[str, int]:
    return {gene_id: i for i, gene_id in enumerate(matrix.gene_ids)}


def build_classifier(
    matrix: ExpressionMatrix,
    selections: Sequence[GeneSelection],
    top_g: int,
    *,
    fixed_m: Optional[int] = None,
    levels: Optional[int] = None,
    smoothing_floor: float = SMOOTHING_FLOOR,
) -> MaxEntClassifier:
    """Class-conditionally independent classifier over the `top_g` best ranked genes.

    Each gene's levels are modelled per class by the maximum entropy fit with the
    gene's chosen number of moments (or `fixed_m` for every gene), floored at
    `smoothing_floor` and renormalised. Priors are the train class frequencies.
    """
    if top_g < 1 or not selections:
        raise InvalidInputError(f"top_g must be >= 1 with at least one ranked gene, got {top_g}")
    chosen = list(selections[:top_g])
    size = levels or chosen[0].levels or DEFAULT_LEVELS
    alphabet = Alphabet.levels(size)
    train = matrix.mask("train")
    labels = matrix.label_array()
    class_columns = [np.flatnonzero(train & (labels == c)) for c in range(matrix.num_classes)]
    for c, columns in enumerate(class_columns):
        if columns.size == 0:
            raise InvalidInputError(f"Class {matrix.class_names[c]!r} has no train columns")

    index = _gene_index(matrix)
    values = np.asarray(matrix.values)
    genes: List[GeneModel] = []
    for selection in chosen:
        row = index[selection.gene_id]
        codes = apply_cut_points(values[row], selection.cut_points)
        m = selection.chosen_m if fixed_m is None else fixed_m
        features = build_moment_features(alphabet, m)
        distributions = []
        log_probs = []
        for columns in class_columns:
            dist = fit_maxent(features, empirical_moments(Sample.of(codes[columns]), features))
            probs = np.maximum(dist.as_array(), smoothing_floor)
            distributions.append(dist)
            log_probs.append(np.log(probs / probs.sum()).tolist())
        genes.append(
            GeneModel(
                gene_id=selection.gene_id,
                gene_index=row,
                m=m,
                cut_points=selection.cut_points,
                distributions=distributions,
                log_probs=log_probs,
            )
        )

    counts = np.array([columns.size for columns in class_columns], dtype=np.float64)
    return MaxEntClassifier(
        genes=genes,
        class_names=matrix.class_names,
        priors=(counts / counts.sum()).tolist(),
        levels=size,
    )


def predict(classifier: MaxEntClassifier, row: Sequence[int] | IntArray) -> Prediction:
    """Most probable class of one sample given the levels of the classifier's genes, in gene order."""
    codes = np.asarray(row, dtype=np.int64)
    if codes.shape != (len(classifier.genes),):
        raise InvalidInputError(f"Expected {len(classifier.genes)} gene levels, got {codes.size}")
    scores = np.log(np.asarray(classifier.priors))
    for gene, code in zip(classifier.genes, codes.tolist()):
        scores = scores + gene.as_array()[:, code]
    return Prediction(label=int(np.argmax(scores)), log_scores=scores.tolist())


def _codes(classifier: MaxEntClassifier, matrix: ExpressionMatrix) -> IntArray:
    """Levels of the classifier's genes for every sample column, shaped (samples, genes)."""
    values = np.asarray(matrix.values)
    index = _gene_index(matrix)
    return np.stack(
        [apply_cut_points(values[index[gene.gene_id]], gene.cut_points) for gene in classifier.genes], axis=1
    )


def _truncate(classifier: MaxEntClassifier, top_g: int) -> MaxEntClassifier:
    return MaxEntClassifier(
        genes=classifier.genes[:top_g],
        class_names=classifier.class_names,
        priors=classifier.priors,
        levels=classifier.levels,
    )


def evaluate(classifier: MaxEntClassifier, matrix: ExpressionMatrix, split: SplitTag = "test") -> EvaluationReport:
    columns = np.flatnonzero(matrix.mask(split))
    if columns.size == 0:
        raise InvalidInputError(f"The matrix has no {split} columns")
    codes = _codes(classifier, matrix)
    labels = matrix.label_array()
    size = len(classifier.class_names)
    confusion = np.zeros((size, size), dtype=np.int64)
    for column in columns.tolist():
        confusion[labels[column], predict(classifier, codes[column]).label] += 1
    return EvaluationReport(
        split=split,
        accuracy=float(np.trace(confusion)) / columns.size,
        confusion=confusion.tolist(),
        n=int(columns.size),
        class_names=classifier.class_names,
    )


def minimax_ranking(
    matrix: ExpressionMatrix, selections: Sequence[GeneSelection], m: int, *, intercept: bool = True
) -> List[GeneSelection]:
    """`selections` reordered by the maximum conditional entropy of the train labels given each gene under `m` moments.

    Genes keep their quantization; the lowest entropy comes first and ties go by gene id.
    """
    if not selections:
        return []
    size = selections[0].levels or DEFAULT_LEVELS
    features = build_cond_moment_features(
        Alphabet.levels(size), ClassSet.numbered(matrix.num_classes), m, intercept=intercept
    )
    train = matrix.mask("train")
    labels = matrix.label_array()[train]
    index = _gene_index(matrix)
    values = np.asarray(matrix.values)
    entropies = {}
    for selection in selections:
        codes = apply_cut_points(values[index[selection.gene_id]], selection.cut_points)[train]
        entropies[selection.gene_id] = cond_err_codelength(features, Sample.of(codes), labels)
    return sorted(selections, key=lambda selection: (entropies[selection.gene_id], selection.gene_id))


def classifier_curve(
    matrix: ExpressionMatrix,
    selections: Sequence[GeneSelection],
    top_range: Iterable[int] = range(1, 131),
    *,
    fixed_ms: Iterable[int] = (1, 10),
    split: SplitTag = "test",
    smoothing_floor: float = SMOOTHING_FLOOR,
) -> List[CurvePoint]:
    """Accuracy against the number of top genes for the MDL classifier and fixed-moment baselines.

    The MDL classifier follows the NML ranking in `selections` with each gene's
    chosen m. A baseline with m moments uses m for every gene and ranks the
    genes by `minimax_ranking`.
    """
    tops = [top_g for top_g in top_range if 1 <= top_g <= len(selections)]
    if not tops:
        return []
    widest = max(tops)
    mdl = build_classifier(matrix, selections, widest, smoothing_floor=smoothing_floor)
    baselines = {
        m: build_classifier(
            matrix, minimax_ranking(matrix, selections, m), widest, fixed_m=m, smoothing_floor=smoothing_floor
        )
        for m in fixed_ms
    }

    points: List[CurvePoint] = []
    for top_g in tops:
        points.append(
            CurvePoint(
                top_g=top_g,
                accuracy=evaluate(_truncate(mdl, top_g), matrix, split).accuracy,
                fixed_accuracy={
                    m: evaluate(_truncate(model, top_g), matrix, split).accuracy for m, model in baselines.items()
                },
            )
        )
    log.info("classifier curve over %d gene counts", len(points))
    return points
