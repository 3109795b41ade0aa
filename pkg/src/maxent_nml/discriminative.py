"""Conditional maximum entropy models p(c | x) and their NML codelengths.

The symbol sequence x is fixed; only the labels are coded. ERR is n times the
conditional entropy of the fit under the empirical symbol distribution, and COMP
is the log of the sum over every label sequence of its maximised conditional
likelihood. That sum depends on a label sequence only through the label counts at
each quantization level, which is what the grouped computation exploits.
"""

from __future__ import annotations

import math
import logging
import itertools
import functools
from typing import List, Optional, Sequence, NamedTuple

import numpy as np
from scipy import special
from joblib import Parallel, delayed

from .types import Sample, Alphabet, ClassSet, CodelengthReport, CondFeatureTable, ConditionalModel
from .maxent import build_moment_features
from ._types import IntArray, FloatArray, MethodTag, CompMethod
from ._utils import LogSumExp, entropy_of, mc_log_mean, compositions, log_multinomial
from ._solver import EntropyOracle, LogLinearDesign, solve
from ._constants import (
    ENUM_CAP,
    CHUNK_SIZE,
    LAMBDA_CAP,
    GROUPED_CAP,
    INTERIOR_FLOOR,
    MIN_MC_DRAWS,
    MAX_ITERATIONS,
    DEFAULT_MC_DRAWS,
    SOLVER_TOLERANCE,
)
from ._exceptions import CapExceededError, InvalidInputError

__all__ = [
    "Complexity",
    "build_cond_moment_features",
    "fit_conditional",
    "conditional_log_likelihood",
    "conditional_objective",
    "conditional_gradient",
    "cond_err_codelength",
    "cond_comp_exact",
    "cond_comp_grouped",
    "cond_comp_monte_carlo",
    "cond_comp",
    "cond_nml",
]

log: logging.Logger = logging.getLogger(__name__)


class Complexity(NamedTuple):
    nats: float
    method: MethodTag
    stderr_nats: Optional[float] = None


def build_cond_moment_features(
    alphabet: Alphabet, classes: ClassSet, m: int, *, intercept: bool = True
) -> CondFeatureTable:
    """Features x^k [c = c'] for every non-reference class c' and k = 0..m (k = 1..m without intercept)."""
    if m < 0:
        raise InvalidInputError(f"The number of moments must be >= 0, got {m}")
    if m == 0 and not intercept:
        raise InvalidInputError("A conditional model without intercept needs m >= 1")
    powers = build_moment_features(alphabet, m).as_array()
    if intercept:
        powers = np.hstack([np.ones((alphabet.size, 1)), powers])
    num_classes = classes.size
    width = powers.shape[1]
    values = np.zeros((alphabet.size, num_classes, width * (num_classes - 1)))
    for c in range(1, num_classes):
        values[:, c, (c - 1) * width : c * width] = powers
    return CondFeatureTable(
        values=values.reshape(alphabet.size * num_classes, -1).tolist(),
        num_symbols=alphabet.size,
        num_classes=num_classes,
        order=m,
        intercept=intercept,
    )


def _check_labels(features: CondFeatureTable, x_sample: Sample, labels: Sequence[int] | IntArray) -> IntArray:
    x_sample.check_alphabet(features.num_symbols)
    y = np.asarray(labels, dtype=np.int64)
    if y.shape != (x_sample.n,):
        raise InvalidInputError(f"Got {y.size} labels for a sample of {x_sample.n} observations")
    if y.min() < 0 or y.max() >= features.num_classes:
        raise InvalidInputError(f"Labels must lie in [0, {features.num_classes})")
    return y


def _level_counts(features: CondFeatureTable, x_sample: Sample) -> IntArray:
    return x_sample.counts(features.num_symbols)


def _design(features: CondFeatureTable, level_counts: IntArray) -> tuple[LogLinearDesign, IntArray]:
    """Design over the levels present in the sample, weighted by their empirical frequencies."""
    present = np.flatnonzero(level_counts > 0)
    counts = level_counts[present]
    design = LogLinearDesign(features.as_array()[present], counts / counts.sum())
    return design, present


def fit_conditional(
    features: CondFeatureTable,
    x_sample: Sample,
    labels: Sequence[int] | IntArray,
    *,
    tolerance: float = SOLVER_TOLERANCE,
    max_iterations: int = MAX_ITERATIONS,
    cap: float = LAMBDA_CAP,
) -> ConditionalModel:
    """Maximum conditional likelihood (equivalently maximum conditional entropy) fit.

    Separable data drive the multipliers to infinity. Once they cross `cap` the
    labels whose probability fell below the pruning threshold are removed and the
    fit continues on the remaining face; labels left below the interior floor at
    convergence get probability exactly zero.
    """
    y = _check_labels(features, x_sample, labels)
    x = x_sample.as_array()
    num_classes = features.num_classes
    table = np.zeros((features.num_symbols, num_classes), dtype=np.int64)
    np.add.at(table, (x, y), 1)

    design, present = _design(features, table.sum(axis=1))
    solution = solve(
        design,
        design.targets_from_counts(table[present][None]),
        tolerance=tolerance,
        max_iterations=max_iterations,
        cap=cap,
    )
    solution.raise_for_failures("conditional maximum entropy fit")

    theta = design.theta(solution.eta)[0]
    scores = features.as_array() @ theta
    probs = np.exp(scores - special.logsumexp(scores, axis=1, keepdims=True))
    fitted = np.exp(solution.log_probs[0])
    boundary = bool(solution.pruned[0]) or bool((fitted < INTERIOR_FLOOR).any())
    if boundary:
        fitted = np.where(fitted < INTERIOR_FLOOR, 0.0, fitted)
        log.debug("conditional fit lies on the boundary; data are (quasi-)separable")
    probs[present] = fitted
    probs /= probs.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore"):
        log_p = np.log(probs[present])

    return ConditionalModel(
        lambdas=(-theta).tolist(),
        cond_probs=probs.tolist(),
        cond_entropy_nats=max(0.0, float(entropy_of(log_p, axis=1) @ design.weights)),
        n=x_sample.n,
        residual=float(solution.residual[0]),
        boundary=boundary,
    )


def conditional_log_likelihood(model: ConditionalModel, x_sample: Sample, labels: Sequence[int] | IntArray) -> float:
    """sum_i ln p(c_i | x_i); -inf when some label has zero probability."""
    probs = model.as_array()
    picked = probs[x_sample.as_array(), np.asarray(labels, dtype=np.int64)]
    if np.any(picked == 0.0):
        return -math.inf
    return float(np.log(picked).sum())


def conditional_objective(
    features: CondFeatureTable, x_sample: Sample, labels: Sequence[int] | IntArray, lambdas: Sequence[float]
) -> float:
    """Negative conditional log-likelihood sum_k lambda_k sum_i phi_k(x_i, c_i) + sum_i ln Z(x_i)."""
    y = _check_labels(features, x_sample, labels)
    phi = features.as_array()[x_sample.as_array()]
    lam = np.asarray(lambdas, dtype=np.float64)
    scores = -(phi @ lam)
    return float(-scores[np.arange(y.size), y].sum() + special.logsumexp(scores, axis=1).sum())


def conditional_gradient(
    features: CondFeatureTable, x_sample: Sample, labels: Sequence[int] | IntArray, lambdas: Sequence[float]
) -> List[float]:
    """Gradient of `conditional_objective`: observed feature sums minus their expectations under the model."""
    y = _check_labels(features, x_sample, labels)
    phi = features.as_array()[x_sample.as_array()]
    lam = np.asarray(lambdas, dtype=np.float64)
    scores = -(phi @ lam)
    probs = np.exp(scores - special.logsumexp(scores, axis=1, keepdims=True))
    observed = phi[np.arange(y.size), y].sum(axis=0)
    expected = np.einsum("ic,icf->f", probs, phi)
    return (observed - expected).tolist()


def cond_err_codelength(features: CondFeatureTable, x_sample: Sample, labels: Sequence[int] | IntArray) -> float:
    """n times the maximum conditional entropy."""
    return x_sample.n * fit_conditional(features, x_sample, labels).cond_entropy_nats


def _label_tables(sequences: IntArray, contexts: IntArray, num_contexts: int, num_classes: int) -> IntArray:
    """Per-level label counts of each label sequence, shaped (sequences, levels, classes)."""
    labels = sequences[:, :, None] == np.arange(num_classes)
    where = contexts[:, None] == np.arange(num_contexts)
    return np.einsum("gic,iv->gvc", labels.astype(np.int64), where.astype(np.int64))


def cond_comp_exact(features: CondFeatureTable, x_sample: Sample, *, cap: int = ENUM_CAP) -> float:
    """COMP by refitting every one of the |C|^n label sequences; an oracle for small instances."""
    level_counts = _level_counts(features, x_sample)
    num_classes = features.num_classes
    n = x_sample.n
    total = num_classes**n
    design, present = _design(features, level_counts)
    if design.rank == 0:
        return 0.0
    if total > cap:
        raise CapExceededError(
            "Number of label sequences |C|^n", size=total, cap=cap, suggestion="use cond_comp_grouped"
        )

    contexts = np.searchsorted(present, x_sample.as_array())
    oracle = EntropyOracle(design)
    acc = LogSumExp()
    sequences = itertools.product(range(num_classes), repeat=n)
    while True:
        block = np.array(list(itertools.islice(sequences, CHUNK_SIZE)), dtype=np.int64)
        if block.size == 0:
            break
        tables = _label_tables(block, contexts, present.size, num_classes)
        acc.add(-n * oracle(tables))
    return acc.value


def _grouped_block(
    design: LogLinearDesign, parts: List[IntArray], weights: List[FloatArray], start: int, stop: int
) -> LogSumExp:
    oracle = EntropyOracle(design)
    n = int(sum(part[0].sum() for part in parts))
    shape = tuple(part.shape[0] for part in parts)
    acc = LogSumExp()
    for lo in range(start, stop, CHUNK_SIZE):
        flat = np.arange(lo, min(stop, lo + CHUNK_SIZE))
        picks = np.unravel_index(flat, shape)
        tables = np.stack([part[pick] for part, pick in zip(parts, picks)], axis=1)
        log_weight = sum(weight[pick] for weight, pick in zip(weights, picks))
        acc.add(log_weight - n * oracle(tables))
    return acc


@functools.lru_cache(maxsize=4096)
def _grouped_cached(
    counts: tuple[int, ...],
    feature_bytes: bytes,
    feature_shape: tuple[int, int, int],
    cap: int,
    draws: int,
    seed: int,
    workers: int,
) -> Complexity:
    features = np.frombuffer(feature_bytes, dtype=np.float64).reshape(feature_shape)
    level_counts = np.asarray(counts, dtype=np.int64)
    design = LogLinearDesign(features, level_counts / level_counts.sum())
    if design.rank == 0:
        return Complexity(0.0, "grouped")

    num_classes = feature_shape[1]
    size = math.prod(math.comb(int(c) + num_classes - 1, num_classes - 1) for c in counts)
    if size > cap:
        log.info("%d label-count groups exceed the cap of %d; estimating COMP by Monte-Carlo", size, cap)
        estimate, stderr = _cond_mc(design, level_counts, draws, seed)
        return Complexity(estimate, "monte-carlo", stderr)

    parts = [np.concatenate(list(compositions(int(c), num_classes, CHUNK_SIZE))) for c in counts]
    weights = [log_multinomial(part) for part in parts]
    if workers > 1:
        bounds = np.linspace(0, size, workers + 1).astype(np.int64)
        blocks = Parallel(n_jobs=workers)(
            delayed(_grouped_block)(design, parts, weights, int(lo), int(hi)) for lo, hi in zip(bounds, bounds[1:])
        )
    else:
        blocks = [_grouped_block(design, parts, weights, 0, size)]
    acc = LogSumExp()
    for block in blocks:
        acc.merge(block)
    log.debug("grouped COMP over %d label-count groups for level counts %s", size, counts)
    return Complexity(acc.value, "grouped")


def cond_comp_grouped(
    features: CondFeatureTable,
    x_sample: Sample,
    *,
    cap: int = GROUPED_CAP,
    draws: int = DEFAULT_MC_DRAWS,
    seed: int = 0,
    workers: int = 1,
) -> Complexity:
    """Exact COMP summed over per-level label-count groups, each weighted by its number of sequences.

    The value depends on the symbol sample only through its level counts and is
    memoised on them. When the number of groups exceeds `cap` the Monte-Carlo
    estimator is used instead and the result is tagged accordingly.
    """
    level_counts = _level_counts(features, x_sample)
    present = np.flatnonzero(level_counts > 0)
    phi = np.ascontiguousarray(features.as_array()[present])
    return _grouped_cached(
        tuple(int(c) for c in level_counts[present]),
        phi.tobytes(),
        (int(phi.shape[0]), int(phi.shape[1]), int(phi.shape[2])),
        cap,
        draws,
        seed,
        workers,
    )


def _cond_mc(design: LogLinearDesign, level_counts: IntArray, draws: int, seed: int) -> tuple[float, float]:
    if draws < MIN_MC_DRAWS:
        raise InvalidInputError(f"Monte-Carlo COMP needs at least {MIN_MC_DRAWS} draws, got {draws}")
    num_classes = design.shape[1]
    n = int(level_counts.sum())
    if design.rank == 0:
        return 0.0, 0.0
    uniform = np.full(num_classes, 1.0 / num_classes)
    rng = np.random.default_rng(seed)
    oracle = EntropyOracle(design)
    terms = []
    remaining = draws
    while remaining > 0:
        block = min(remaining, CHUNK_SIZE)
        tables = np.stack([rng.multinomial(int(c), uniform, size=block) for c in level_counts], axis=1)
        terms.append(-n * oracle(tables))
        remaining -= block
    return mc_log_mean(np.concatenate(terms), n * math.log(num_classes))


def cond_comp_monte_carlo(
    features: CondFeatureTable,
    x_sample: Sample,
    draws: int = DEFAULT_MC_DRAWS,
    seed: int = 0,
) -> tuple[float, float]:
    """Estimate COMP from `draws` uniformly random label sequences; returns (estimate, stderr) in nats."""
    level_counts = _level_counts(features, x_sample)
    design, present = _design(features, level_counts)
    return _cond_mc(design, level_counts[present], draws, seed)


def cond_comp(
    features: CondFeatureTable,
    x_sample: Sample,
    method: CompMethod = "types",
    *,
    draws: int = DEFAULT_MC_DRAWS,
    seed: int = 0,
    enum_cap: int = ENUM_CAP,
    grouped_cap: int = GROUPED_CAP,
    workers: int = 1,
) -> Complexity:
    """COMP of the labels given the symbols by the named method; `"types"` is the grouped computation.

    Every method depends on the symbol sample only through its level counts.
    """
    if method == "exact":
        return Complexity(cond_comp_exact(features, x_sample, cap=enum_cap), "exact-enum")
    if method == "types":
        return cond_comp_grouped(features, x_sample, cap=grouped_cap, draws=draws, seed=seed, workers=workers)
    if method == "mc":
        estimate, stderr = cond_comp_monte_carlo(features, x_sample, draws=draws, seed=seed)
        return Complexity(estimate, "monte-carlo", stderr)
    raise InvalidInputError(f"Unknown COMP method {method!r}")


def cond_nml(
    features: CondFeatureTable,
    x_sample: Sample,
    labels: Sequence[int] | IntArray,
    method: CompMethod = "types",
    *,
    draws: int = DEFAULT_MC_DRAWS,
    seed: int = 0,
    enum_cap: int = ENUM_CAP,
    grouped_cap: int = GROUPED_CAP,
    workers: int = 1,
    complexity: Optional[Complexity] = None,
) -> CodelengthReport:
    """Codelength of the labels given the symbols: conditional ERR + COMP.

    A `complexity` computed beforehand for the same features and level counts
    is used as is; otherwise COMP is computed with `method`.
    """
    err = cond_err_codelength(features, x_sample, labels)
    comp = complexity
    if comp is None:
        comp = cond_comp(
            features,
            x_sample,
            method,
            draws=draws,
            seed=seed,
            enum_cap=enum_cap,
            grouped_cap=grouped_cap,
            workers=workers,
        )
    return CodelengthReport.combine(
        err,
        comp.nats,
        method=comp.method,
        n=x_sample.n,
        num_features=features.num_features,
        mc_stderr_nats=comp.stderr_nats,
    )
