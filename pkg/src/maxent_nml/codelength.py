"""ERR, COMP and NML codelengths of generative maximum entropy models.

All codelengths are in nats. COMP is the log of the Shtarkov sum over every sequence
of length n, sum_y exp(-n H(p*_y)), realised three ways: brute-force enumeration of
sequences (an oracle for small K^n), an exact sum over type classes (the default),
and a Monte-Carlo estimate over uniformly drawn sequences.
"""

from __future__ import annotations

import math
import logging
import itertools
from typing import Iterator, Optional

import numpy as np
from joblib import Parallel, delayed

from .types import Sample, Alphabet, TypeClass, FeatureTable, CodelengthReport
from .maxent import fit_maxent, empirical_moments
from ._types import CompMethod
from ._utils import LogSumExp, mc_log_mean, compositions, log_multinomial
from ._solver import EntropyOracle, LogLinearDesign
from ._constants import ENUM_CAP, CHUNK_SIZE, MIN_MC_DRAWS, TYPE_CLASS_CAP, DEFAULT_MC_DRAWS
from ._exceptions import CapExceededError, InvalidInputError

__all__ = [
    "err_codelength",
    "enumerate_type_classes",
    "comp_exact_enum",
    "comp_by_types",
    "comp_monte_carlo",
    "nml_codelength",
]

log: logging.Logger = logging.getLogger(__name__)


def _design(features: FeatureTable, alphabet: Optional[Alphabet] = None) -> LogLinearDesign:
    if alphabet is not None and alphabet.size != features.num_symbols:
        raise InvalidInputError(
            f"Feature table has {features.num_symbols} rows but the alphabet has {alphabet.size} symbols"
        )
    return LogLinearDesign(features.as_array()[None, :, :], np.ones(1))


def _check_n(n: int) -> None:
    if n < 1:
        raise InvalidInputError(f"The sequence length must be >= 1, got {n}")


def err_codelength(features: FeatureTable, sample: Sample) -> float:
    """n times the entropy of the maximum entropy fit to the sample's moments."""
    dist = fit_maxent(features, empirical_moments(sample, features))
    return sample.n * dist.entropy_nats


def enumerate_type_classes(size: int, n: int) -> Iterator[TypeClass]:
    """Every type class of length-n sequences over `size` symbols, in lexicographic order of counts."""
    _check_n(n)
    for block in compositions(n, size, CHUNK_SIZE):
        weights = log_multinomial(block)
        for counts, weight in zip(block.tolist(), weights.tolist()):
            yield TypeClass(counts=counts, log_multiplicity=weight)


def comp_exact_enum(features: FeatureTable, alphabet: Alphabet, n: int, *, cap: int = ENUM_CAP) -> float:
    """COMP by enumerating all K^n sequences; an oracle for small instances."""
    _check_n(n)
    design = _design(features, alphabet)
    size = alphabet.size
    total = size**n
    if design.rank == 0:
        return 0.0
    if total > cap:
        raise CapExceededError(
            "Number of sequences K^n", size=total, cap=cap, suggestion="use comp_by_types or comp_monte_carlo"
        )

    oracle = EntropyOracle(design)
    acc = LogSumExp()
    sequences = itertools.product(range(size), repeat=n)
    while True:
        block = np.array(list(itertools.islice(sequences, CHUNK_SIZE)), dtype=np.int64)
        if block.size == 0:
            break
        counts = (block[:, :, None] == np.arange(size)).sum(axis=1)
        acc.add(-n * oracle(counts[:, None, :]))
    log.debug("exact enumeration: %d sequences, %d fits", total, oracle.fits)
    return acc.value


def _type_block_sum(design: LogLinearDesign, n: int, first: int) -> LogSumExp:
    """Log-sum over the type classes whose first count equals `first`."""
    oracle = EntropyOracle(design)
    size = design.shape[1]
    acc = LogSumExp()
    for rest in compositions(n - first, size - 1, CHUNK_SIZE):
        counts = np.hstack([np.full((rest.shape[0], 1), first), rest])
        acc.add(log_multinomial(counts) - n * oracle(counts[:, None, :]))
    return acc


def comp_by_types(
    features: FeatureTable,
    alphabet: Alphabet,
    n: int,
    *,
    cap: int = TYPE_CLASS_CAP,
    workers: int = 1,
) -> float:
    """Exact COMP as a log-sum over type classes of [ln multiplicity - n H(p*_type)].

    The classes are partitioned by their first count; partitions may run on
    `workers` processes and are merged in ascending order, so the value does not
    depend on the worker count.
    """
    _check_n(n)
    design = _design(features, alphabet)
    classes = math.comb(n + alphabet.size - 1, alphabet.size - 1)
    if design.rank == 0:
        return 0.0
    if classes > cap:
        raise CapExceededError("Number of type classes", size=classes, cap=cap, suggestion="use method='mc'")

    if workers > 1:
        parts = Parallel(n_jobs=workers)(delayed(_type_block_sum)(design, n, first) for first in range(n + 1))
    else:
        parts = [_type_block_sum(design, n, first) for first in range(n + 1)]

    acc = LogSumExp()
    for part in parts:
        acc.merge(part)
    log.debug("type-class sum over %d classes", classes)
    return acc.value


def comp_monte_carlo(
    features: FeatureTable,
    alphabet: Alphabet,
    n: int,
    draws: int = DEFAULT_MC_DRAWS,
    seed: int = 0,
) -> tuple[float, float]:
    """Estimate COMP = ln(K^n E_uniform[exp(-n H(p*_y))]) from `draws` uniform sequences.

    Returns the estimate and its standard error, both in nats. The estimate is a
    deterministic function of `seed`.
    """
    _check_n(n)
    if draws < MIN_MC_DRAWS:
        raise InvalidInputError(f"Monte-Carlo COMP needs at least {MIN_MC_DRAWS} draws, got {draws}")
    design = _design(features, alphabet)
    if design.rank == 0:
        return 0.0, 0.0

    size = alphabet.size
    rng = np.random.default_rng(seed)
    oracle = EntropyOracle(design)
    terms = []
    remaining = draws
    while remaining > 0:
        block = min(remaining, CHUNK_SIZE)
        counts = rng.multinomial(n, np.full(size, 1.0 / size), size=block)
        terms.append(-n * oracle(counts[:, None, :]))
        remaining -= block
    return mc_log_mean(np.concatenate(terms), n * math.log(size))


def nml_codelength(
    features: FeatureTable,
    sample: Sample,
    method: CompMethod = "types",
    *,
    draws: int = DEFAULT_MC_DRAWS,
    seed: int = 0,
    enum_cap: int = ENUM_CAP,
    type_cap: int = TYPE_CLASS_CAP,
    workers: int = 1,
) -> CodelengthReport:
    """Stochastic complexity ERR + COMP of the sample under the maximum entropy model."""
    alphabet_size = features.num_symbols
    sample.check_alphabet(alphabet_size)
    alphabet = Alphabet.levels(alphabet_size)
    err = err_codelength(features, sample)
    stderr = None
    if method == "exact":
        comp = comp_exact_enum(features, alphabet, sample.n, cap=enum_cap)
        tag = "exact-enum"
    elif method == "types":
        comp = comp_by_types(features, alphabet, sample.n, cap=type_cap, workers=workers)
        tag = "type-class"
    elif method == "mc":
        comp, stderr = comp_monte_carlo(features, alphabet, sample.n, draws=draws, seed=seed)
        tag = "monte-carlo"
    else:
        raise InvalidInputError(f"Unknown COMP method {method!r}")
    return CodelengthReport.combine(
        err, comp, method=tag, n=sample.n, num_features=features.num_features, mc_stderr_nats=stderr
    )
