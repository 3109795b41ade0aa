from __future__ import annotations

import math
import logging
from typing import List, Sequence

import numpy as np
from scipy import special, optimize

from .types import Sample, Alphabet, FeatureTable, MomentVector, MaxEntDistribution
from ._types import FloatArray
from ._utils import entropy_of
from ._solver import LogLinearDesign, solve
from ._constants import LAMBDA_CAP, INTERIOR_FLOOR, MAX_ITERATIONS, SOLVER_TOLERANCE, INFEASIBILITY_SLACK
from ._exceptions import ConvergenceError, FeatureRangeError, InvalidInputError, InfeasibleConstraintsError

__all__ = [
    "build_moment_features",
    "build_indicator_features",
    "empirical_moments",
    "fit_maxent",
    "entropy",
    "log_likelihood",
    "dual_objective",
    "dual_gradient",
]

log: logging.Logger = logging.getLogger(__name__)


def build_moment_features(alphabet: Alphabet, m: int) -> FeatureTable:
    """Moment features phi_k(x) = x^k for k = 1..m."""
    if m < 0:
        raise InvalidInputError(f"The number of moments must be >= 0, got {m}")
    for symbol in alphabet.symbols:
        if symbol != 0.0 and m * math.log10(abs(symbol)) >= 308.0:
            raise FeatureRangeError(f"{symbol}^{m} is not representable as a float")
    values = np.power(np.asarray(alphabet.symbols)[:, None], np.arange(1, m + 1)[None, :])
    if not np.all(np.isfinite(values)):
        raise FeatureRangeError(f"Moment features of order {m} overflow for symbols {alphabet.symbols}")
    return FeatureTable(values=values.tolist(), kind="moment")


def build_indicator_features(alphabet: Alphabet) -> FeatureTable:
    """Indicators of all symbols but the last; they span the whole simplex."""
    size = alphabet.size
    return FeatureTable(values=np.eye(size)[:, : size - 1].tolist(), kind="indicator")


def empirical_moments(sample: Sample, features: FeatureTable) -> MomentVector:
    sample.check_alphabet(features.num_symbols)
    phi = features.as_array()
    means = phi[sample.as_array()].mean(axis=0)
    return MomentVector(means=means.tolist())


def _check_moments(features: FeatureTable, moments: MomentVector) -> tuple[FloatArray, FloatArray]:
    phi = features.as_array()
    mu = moments.as_array()
    if mu.shape != (features.num_features,):
        raise InvalidInputError(f"Expected {features.num_features} moments, got {mu.size}")
    return phi, mu


def _polytope_slack(phi: FloatArray, mu: FloatArray) -> float:
    """Smallest uniform violation of E_p[phi] = mu over all distributions p (columns rescaled to unit size)."""
    size, width = phi.shape
    scale = np.maximum(np.abs(phi).max(axis=0), 1.0)
    a = (phi / scale).T
    b = mu / scale
    # variables: p_0..p_{K-1}, s;  minimise s subject to |a p - b| <= s, sum p = 1
    cost = np.zeros(size + 1)
    cost[-1] = 1.0
    upper = np.vstack([np.hstack([a, -np.ones((width, 1))]), np.hstack([-a, -np.ones((width, 1))])])
    result = optimize.linprog(
        cost,
        A_ub=upper,
        b_ub=np.concatenate([b, -b]),
        A_eq=np.hstack([np.ones((1, size)), np.zeros((1, 1))]),
        b_eq=[1.0],
        bounds=[(0.0, None)] * (size + 1),
        method="highs",
    )
    if result.status != 0:
        raise ConvergenceError("moment polytope membership check failed", residual=math.inf, iterations=0)
    return float(result.fun)


def _face_support(phi: FloatArray, mu: FloatArray, slack: float) -> List[int]:
    """Symbols that some feasible distribution charges; the maximum entropy fit lives on exactly these."""
    size, width = phi.shape
    scale = np.maximum(np.abs(phi).max(axis=0), 1.0)
    a = (phi / scale).T
    b = mu / scale
    room = slack + 1e-12
    support: List[int] = []
    for j in range(size):
        cost = np.zeros(size)
        cost[j] = -1.0
        result = optimize.linprog(
            cost,
            A_ub=np.vstack([a, -a]),
            b_ub=np.concatenate([b + room, -b + room]),
            A_eq=np.ones((1, size)),
            b_eq=[1.0],
            bounds=[(0.0, None)] * size,
            method="highs",
        )
        if result.status == 0 and -result.fun > 1e-9:
            support.append(j)
    return support


def fit_maxent(
    features: FeatureTable,
    moments: MomentVector,
    *,
    tolerance: float = SOLVER_TOLERANCE,
    max_iterations: int = MAX_ITERATIONS,
    cap: float = LAMBDA_CAP,
) -> MaxEntDistribution:
    """The maximum entropy distribution whose feature expectations equal `moments`.

    Interior moments are fitted directly on the dual. Moments on the boundary of the
    moment polytope drive the multipliers to infinity; in that case the fit is
    recomputed on the exposed face, the set of symbols some feasible distribution
    charges, and those off the face get probability exactly zero.
    """
    phi, mu = _check_moments(features, moments)
    size, width = phi.shape

    if width == 0:
        probs = np.full(size, 1.0 / size)
        return MaxEntDistribution(
            probs=probs.tolist(),
            lambdas=[math.log(size)],
            support=list(range(size)),
            entropy_nats=math.log(size),
        )

    design = LogLinearDesign(phi[None, :, :], np.ones(1))
    targets = design.targets_from_moments(mu)

    boundary = False
    if design.null_residual(mu) > design.tolerance(INFEASIBILITY_SLACK):
        solution = None
    else:
        solution = solve(
            design, targets, tolerance=tolerance, max_iterations=max_iterations, cap=cap, on_cap="stop"
        )
        if not (solution.converged[0] and solution.log_probs[0, 0].min() > math.log(INTERIOR_FLOOR)):
            solution = None

    if solution is None:
        slack = _polytope_slack(phi, mu)
        if slack > INFEASIBILITY_SLACK:
            raise InfeasibleConstraintsError(
                f"Moments {mu.tolist()} lie outside the moment polytope of the feature table",
                moments=mu.tolist(),
                slack=slack,
            )
        support = _face_support(phi, mu, slack)
        boundary = len(support) < size
        mask = np.zeros((1, 1, size), dtype=bool)
        mask[0, 0, support] = True
        log.debug("fitting on the exposed face %s of %d symbols", support, size)
        solution = solve(design, targets, mask=mask, tolerance=tolerance, max_iterations=max_iterations, cap=cap)
        solution.raise_for_failures("maximum entropy fit")

    log_p = solution.log_probs[0, 0]
    probs = np.exp(log_p)
    probs = probs / probs.sum()
    support_idx = np.flatnonzero(probs > 0.0)
    theta = design.theta(solution.eta)[0]
    lambda_0 = float(special.logsumexp(phi[support_idx] @ theta))
    residual = float(np.abs(probs @ phi - mu).max())
    return MaxEntDistribution(
        probs=probs.tolist(),
        lambdas=[lambda_0, *(-theta).tolist()],
        support=support_idx.tolist(),
        entropy_nats=max(0.0, float(entropy_of(log_p))),
        residual=residual,
        boundary=boundary or bool(solution.pruned[0]),
    )


def entropy(dist: MaxEntDistribution) -> float:
    probs = dist.as_array()
    positive = probs[probs > 0.0]
    return float(-(positive * np.log(positive)).sum())


def log_likelihood(dist: MaxEntDistribution, sample: Sample) -> float:
    """Sum of ln p(x_i); -inf when some observation has zero probability."""
    probs = dist.as_array()
    sample.check_alphabet(probs.size)
    counts = sample.counts(probs.size)
    used = counts > 0
    if np.any(probs[used] == 0.0):
        return -math.inf
    return float((counts[used] * np.log(probs[used])).sum())


def dual_objective(features: FeatureTable, moments: MomentVector, lambdas: Sequence[float]) -> float:
    """lambda_0(Lambda) + sum_k lambda_k mu_k, with lambda_0 the log-normaliser at Lambda = (lambda_1..lambda_m)."""
    phi, mu = _check_moments(features, moments)
    lam = np.asarray(lambdas, dtype=np.float64)
    return float(special.logsumexp(-(phi @ lam)) + lam @ mu)


def dual_gradient(features: FeatureTable, moments: MomentVector, lambdas: Sequence[float]) -> List[float]:
    """mu - E_p[phi] for p(x) proportional to exp(-Lambda . phi(x))."""
    phi, mu = _check_moments(features, moments)
    lam = np.asarray(lambdas, dtype=np.float64)
    scores = -(phi @ lam)
    probs = np.exp(scores - special.logsumexp(scores))
    return (mu - probs @ phi).tolist()
