from __future__ import annotations

import logging
from typing import Dict, List, Tuple, Union, Mapping, Iterable, Optional, Sequence

import numpy as np
from tqdm import tqdm
from joblib import Parallel, delayed

from ._config import PipelineConfig
from ..types import Sample, Alphabet, ClassSet, Quantization, GeneSelection, ExpressionMatrix
from .._types import IntArray, CompMethod
from ._quantize import quantize_matrix
from .._constants import DEFAULT_LEVELS, DEFAULT_M_RANGE, DEFAULT_MC_DRAWS
from .._exceptions import MaxEntNMLError, SelectionError
from ..discriminative import Complexity, cond_nml, cond_comp, build_cond_moment_features

__all__ = ["select_m_for_gene", "rank_genes", "precompute_complexities"]

log: logging.Logger = logging.getLogger(__name__)

LevelCounts = Tuple[int, ...]

KnownComplexity = Union[Complexity, str]
"""A COMP value, or the reason it could not be computed."""


def select_m_for_gene(
    sample: Sample,
    labels: Sequence[int] | IntArray,
    m_range: Iterable[int] = DEFAULT_M_RANGE,
    comp_method: CompMethod = "types",
    *,
    levels: int = DEFAULT_LEVELS,
    num_classes: Optional[int] = None,
    gene_id: str = "gene",
    intercept: bool = True,
    draws: int = DEFAULT_MC_DRAWS,
    seed: int = 0,
    quantization: Optional[Quantization] = None,
    complexities: Optional[Mapping[int, KnownComplexity]] = None,
) -> GeneSelection:
    """Conditional NML of the labels given the quantized gene for every m; the smallest wins.

    Ties go to the smaller m. An m whose codelength cannot be computed is
    recorded in `failures` and the remaining ones are still compared.
    `complexities` holds COMP by m for this gene's level counts, as returned by
    `precompute_complexities`; any m missing from it is computed here.
    """
    y = np.asarray(labels, dtype=np.int64)
    alphabet = Alphabet.levels(levels)
    classes = ClassSet.numbered(num_classes or int(y.max()) + 1)
    known: Mapping[int, KnownComplexity] = complexities or {}

    nml: Dict[int, float] = {}
    err: Dict[int, float] = {}
    comp: Dict[int, float] = {}
    failures: Dict[int, str] = {}
    for m in sorted(set(m_range)):
        complexity = known.get(m)
        if isinstance(complexity, str):
            log.info("gene %s, m=%d failed: %s", gene_id, m, complexity)
            failures[m] = complexity
            continue
        try:
            features = build_cond_moment_features(alphabet, classes, m, intercept=intercept)
            report = cond_nml(features, sample, y, comp_method, draws=draws, seed=seed, complexity=complexity)
        except MaxEntNMLError as exc:
            log.info("gene %s, m=%d failed: %s", gene_id, m, exc)
            failures[m] = str(exc)
            continue
        nml[m] = report.nml_nats
        err[m] = report.err_nats
        comp[m] = report.comp_nats

    if not nml:
        raise SelectionError({f"{gene_id} m={m}": reason for m, reason in failures.items()})

    chosen = min(nml, key=lambda m: (nml[m], m))
    return GeneSelection(
        gene_id=gene_id,
        chosen_m=chosen,
        min_nml_nats=nml[chosen],
        nml_nats=nml,
        err_nats=err,
        comp_nats=comp,
        levels=levels,
        cut_points=[] if quantization is None else quantization.cut_points,
        constant=False if quantization is None else quantization.constant,
        failures=failures,
    )


def _complexity(counts: LevelCounts, m: int, num_classes: int, config: PipelineConfig) -> KnownComplexity:
    features = build_cond_moment_features(
        Alphabet.levels(len(counts)), ClassSet.numbered(num_classes), m, intercept=config.intercept
    )
    # any sample with these level counts has the same COMP
    sample = Sample.of(np.repeat(np.arange(len(counts)), counts))
    try:
        return cond_comp(features, sample, config.comp_method, draws=config.mc_draws, seed=config.seed)
    except MaxEntNMLError as exc:
        return str(exc)


def precompute_complexities(
    level_counts: Iterable[LevelCounts], num_classes: int, config: PipelineConfig, *, progress: bool = False
) -> Dict[LevelCounts, Dict[int, KnownComplexity]]:
    """COMP for every distinct level-count vector and every m of `config`, computed once.

    Each value is computed in a single process, so the results do not depend on
    `config.workers`; the pairs are spread over the workers.
    """
    distinct = sorted(set(level_counts))
    pairs = [(counts, m) for counts in distinct for m in config.moments]
    jobs = (delayed(_complexity)(counts, m, num_classes, config) for counts, m in pairs)
    if config.workers > 1:
        results = Parallel(n_jobs=config.workers, return_as="generator")(jobs)
    else:
        results = (func(*args, **kwargs) for func, args, kwargs in jobs)

    table: Dict[LevelCounts, Dict[int, KnownComplexity]] = {counts: {} for counts in distinct}
    values = tqdm(results, total=len(pairs), desc="complexities", disable=not progress)
    for (counts, m), value in zip(pairs, values):
        table[counts][m] = value
    log.info("computed COMP for %d level-count vectors and %d values of m", len(distinct), len(config.moments))
    return table


def _select_gene(
    gene_id: str,
    row: IntArray,
    labels: IntArray,
    num_classes: int,
    quantization: Quantization,
    config: PipelineConfig,
    complexities: Mapping[int, KnownComplexity],
) -> GeneSelection:
    return select_m_for_gene(
        Sample.of(row),
        labels,
        config.moments,
        config.comp_method,
        levels=config.levels,
        num_classes=num_classes,
        gene_id=gene_id,
        intercept=config.intercept,
        draws=config.mc_draws,
        seed=config.seed,
        quantization=quantization,
        complexities=complexities,
    )


def rank_genes(
    matrix: ExpressionMatrix, config: PipelineConfig | None = None, *, progress: bool = False
) -> List[GeneSelection]:
    """Every gene with its chosen m, in ascending order of minimum NML (ties by gene id).

    `matrix` holds preprocessed values; each gene is quantized with cut points
    from its train columns and coded on the train columns only. COMP depends on
    a gene only through its level counts, so it is computed once per distinct
    level-count vector before the genes are scored.
    """
    config = config or PipelineConfig()
    codes, quantizations = quantize_matrix(matrix, config.levels, config.quantize_method)
    train = matrix.mask("train")
    labels = matrix.label_array()[train]

    counts: List[LevelCounts] = [
        tuple(int(c) for c in np.bincount(codes[i, train], minlength=config.levels)) for i in range(matrix.num_genes)
    ]
    complexities = precompute_complexities(counts, matrix.num_classes, config, progress=progress)

    jobs = (
        delayed(_select_gene)(
            gene_id, codes[i, train], labels, matrix.num_classes, quantizations[i], config, complexities[counts[i]]
        )
        for i, gene_id in enumerate(matrix.gene_ids)
    )
    if config.workers > 1:
        results = Parallel(n_jobs=config.workers, return_as="generator")(jobs)
    else:
        results = (func(*args, **kwargs) for func, args, kwargs in jobs)

    selections = list(tqdm(results, total=matrix.num_genes, desc="ranking genes", disable=not progress))
    selections.sort(key=lambda selection: (selection.min_nml_nats, selection.gene_id))
    log.info("ranked %d genes at %d levels", len(selections), config.levels)
    return selections
