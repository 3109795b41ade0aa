"""Batched damped Newton for log-linear families.

Every fit in this package is an instance of one problem: given contexts v with
weights w_v, labels c, feature vectors phi(v, c) and a target feature mean t,
minimise the convex dual

    sum_v w_v ln Z_v(theta) - theta . t,   Z_v(theta) = sum_c exp(theta . phi(v, c))

whose minimiser gives p(c | v) proportional to exp(theta . phi(v, c)). A generative
maximum-entropy fit is the single-context case with the alphabet as labels; a
conditional model uses the quantization levels as contexts and the classes as labels.

Features are first mapped to an orthonormal basis of their (per-context centred)
column space, which removes linear dependencies (x^5..x^7 on five levels) and makes
the Newton system well conditioned. Residuals are always reported in the caller's
original feature units.
"""

from __future__ import annotations

import math
import logging
from typing import Dict, Optional
from dataclasses import dataclass
from typing_extensions import Literal

import numpy as np
from scipy import special

from ._types import IntArray, BoolArray, FloatArray
from ._utils import entropy_of
from ._constants import (
    RANK_RTOL,
    LAMBDA_CAP,
    ARMIJO_SLOPE,
    ARMIJO_FACTOR,
    MAX_BACKTRACKS,
    MAX_ITERATIONS,
    PRUNE_THRESHOLD,
    ACCEPT_TOLERANCE,
    SOLVER_TOLERANCE,
    MOMENT_KEY_DECIMALS,
)
from ._exceptions import ConvergenceError

log: logging.Logger = logging.getLogger(__name__)

_EPS = float(np.finfo(np.float64).eps)


class LogLinearDesign:
    """Reparametrisation of a log-linear family onto an orthonormal feature basis."""

    features: FloatArray
    """Original features, shaped (contexts, labels, features)."""

    weights: FloatArray
    """Context weights, summing to 1."""

    basis: FloatArray
    """Orthonormal features scaled to unit RMS, shaped (contexts, labels, rank)."""

    def __init__(self, features: FloatArray, weights: FloatArray) -> None:
        features = np.asarray(features, dtype=np.float64)
        if features.ndim != 3:
            raise ValueError(f"features must be (contexts, labels, features), got shape {features.shape}")
        contexts, labels, width = features.shape
        self.features = features
        self.weights = np.asarray(weights, dtype=np.float64)
        self.centering = features.mean(axis=1)
        self.feature_scale = float(np.abs(features).max()) if features.size else 0.0

        rows = contexts * labels
        centred = (features - self.centering[:, None, :]).reshape(rows, width)
        scale = math.sqrt(rows)
        if width == 0 or not np.any(centred):
            rank = 0
            u = np.zeros((rows, 0))
            s = np.zeros(0)
            wt = np.zeros((0, width))
        else:
            u, s, wt = np.linalg.svd(centred, full_matrices=False)
            rank = int((s > RANK_RTOL * s[0]).sum())

        self.rank = rank
        self.saturated = rank == contexts * (labels - 1)
        self.basis = (u[:, :rank] * scale).reshape(contexts, labels, rank)
        self._row_space = wt[:rank]
        # theta = to_theta @ eta; grad in original units = to_original @ grad in basis units
        self.to_theta = (wt[:rank].T / s[:rank]) * scale
        self.to_original = (wt[:rank].T * s[:rank]) / scale
        self._from_original = (wt[:rank] / s[:rank, None]) * scale

    @property
    def shape(self) -> tuple[int, int, int]:
        contexts, labels, width = self.features.shape
        return contexts, labels, width

    def tolerance(self, base: float) -> float:
        return max(base, 64.0 * _EPS * self.feature_scale)

    def targets_from_counts(self, counts: FloatArray | IntArray) -> FloatArray:
        """Basis-unit targets for count tables shaped (groups, contexts, labels)."""
        counts = np.asarray(counts, dtype=np.float64)
        totals = counts.sum(axis=(1, 2))
        return np.einsum("gvc,vcr->gr", counts / totals[:, None, None], self.basis)

    def targets_from_moments(self, moments: FloatArray) -> FloatArray:
        """Basis-unit targets for single-context feature means shaped (groups, features)."""
        shifted = np.atleast_2d(moments) - self.centering[0]
        return shifted @ self._from_original.T

    def null_residual(self, moments: FloatArray) -> float:
        """How far the moments are from the affine hull of the feature rows."""
        shifted = np.asarray(moments, dtype=np.float64) - self.centering[0]
        projected = self._row_space.T @ (self._row_space @ shifted)
        return float(np.abs(shifted - projected).max()) if shifted.size else 0.0

    def theta(self, eta: FloatArray) -> FloatArray:
        """Natural parameters on the original features (scores are theta . phi)."""
        return np.atleast_2d(eta) @ self.to_theta.T


@dataclass
class Solution:
    eta: FloatArray
    log_probs: FloatArray
    """Fitted log p(c | v), shaped (groups, contexts, labels); -inf off the support."""

    residual: FloatArray
    iterations: IntArray
    converged: BoolArray
    pruned: BoolArray
    """Groups whose support was reduced because the multipliers crossed the cap."""

    capped: BoolArray
    """Groups that stopped at the cap without pruning (on_cap="stop")."""

    def entropies(self, weights: FloatArray) -> FloatArray:
        return np.asarray(entropy_of(self.log_probs, axis=2) @ weights, dtype=np.float64)

    def raise_for_failures(self, what: str) -> None:
        failed = ~self.converged
        if failed.any():
            worst = int(np.argmax(np.where(failed, self.residual, -np.inf)))
            raise ConvergenceError(
                f"{what}: {int(failed.sum())} of {failed.size} fits did not converge",
                residual=float(self.residual[worst]),
                iterations=int(self.iterations[worst]),
            )


def _scores(design: LogLinearDesign, eta: FloatArray, mask: Optional[BoolArray]) -> FloatArray:
    scores = np.einsum("vcr,ar->avc", design.basis, eta)
    if mask is not None:
        scores = np.where(mask, scores, -np.inf)
    return scores


def _objective(design: LogLinearDesign, eta: FloatArray, targets: FloatArray, mask: Optional[BoolArray]) -> FloatArray:
    log_z = special.logsumexp(_scores(design, eta, mask), axis=2)
    return np.asarray(log_z @ design.weights - np.einsum("ar,ar->a", eta, targets), dtype=np.float64)


def _evaluate(
    design: LogLinearDesign, eta: FloatArray, targets: FloatArray, mask: Optional[BoolArray]
) -> tuple[FloatArray, FloatArray, FloatArray, FloatArray]:
    scores = _scores(design, eta, mask)
    log_z = special.logsumexp(scores, axis=2)
    log_p = scores - log_z[..., None]
    probs = np.exp(log_p)
    basis = design.basis
    weights = design.weights

    objective = log_z @ weights - np.einsum("ar,ar->a", eta, targets)
    means = np.einsum("avc,vcr->avr", probs, basis)
    gradient = np.einsum("v,avr->ar", weights, means) - targets
    second = np.einsum("avc,vcr,vcs->avrs", probs, basis, basis)
    hessian = np.einsum("v,avrs->ars", weights, second - means[..., :, None] * means[..., None, :])
    return objective, gradient, hessian, log_p


def solve(
    design: LogLinearDesign,
    targets: FloatArray,
    *,
    mask: Optional[BoolArray] = None,
    tolerance: float = SOLVER_TOLERANCE,
    max_iterations: int = MAX_ITERATIONS,
    cap: float = LAMBDA_CAP,
    on_cap: Literal["prune", "stop"] = "prune",
) -> Solution:
    """Fit every row of `targets` with damped Newton and Armijo backtracking.

    Rows are independent: each keeps its own step size and leaves the active set as
    soon as its residual is below `tolerance`, so a row's result does not depend on
    which other rows share the batch. A row that runs out of iterations or of line
    search steps still counts as converged when its residual is within
    `ACCEPT_TOLERANCE`.
    """
    targets = np.atleast_2d(np.asarray(targets, dtype=np.float64))
    groups = targets.shape[0]
    contexts, labels, _ = design.shape
    rank = design.rank

    eta = np.zeros((groups, rank))
    support = np.ones((groups, contexts, labels), dtype=bool) if mask is None else np.array(mask, dtype=bool)
    log_probs = np.zeros((groups, contexts, labels))
    residual = np.full(groups, np.inf)
    iterations = np.zeros(groups, dtype=np.int64)
    converged = np.zeros(groups, dtype=bool)
    pruned = np.zeros(groups, dtype=bool)
    capped = np.zeros(groups, dtype=bool)
    rounds = np.zeros(groups, dtype=np.int64)

    if rank == 0:
        scores = np.where(support, 0.0, -np.inf)
        log_probs = scores - special.logsumexp(scores, axis=2)[..., None]
        residual[:] = 0.0
        converged[:] = True
        return Solution(eta, log_probs, residual, iterations, converged, pruned, capped)

    tol = design.tolerance(tolerance)
    accept = design.tolerance(ACCEPT_TOLERANCE)
    log_floor = math.log(PRUNE_THRESHOLD)
    active = np.arange(groups)

    for it in range(max_iterations + 1):
        if active.size == 0:
            break

        e = eta[active]
        t = targets[active]
        m = support[active]
        objective, gradient, hessian, log_p = _evaluate(design, e, t, m)
        res = np.abs(gradient @ design.to_original.T).max(axis=1)
        residual[active] = res
        iterations[active] = it
        log_probs[active] = log_p

        done = res <= tol
        converged[active[done]] = True

        over = ~done & (np.abs(e).max(axis=1) > cap * (1 + rounds[active]))
        if over.any():
            rows = active[over]
            if on_cap == "stop":
                capped[rows] = True
                done |= over
            else:
                support[rows] = m[over] & (log_p[over] > log_floor)
                rounds[rows] += 1
                pruned[rows] = True
                log.debug("pruned the support of %d fits at |eta| > %.1f", rows.size, cap)

        if it == max_iterations:
            settled = ~done & (res <= accept)
            converged[active[settled]] = True
            if settled.any():
                log.debug("%d fits reached the iteration cap within the accept tolerance", int(settled.sum()))
            break

        stepping = ~done & ~over
        idx = np.flatnonzero(stepping)
        if idx.size:
            g = gradient[idx]
            h = hessian[idx]
            ridge = 1e-12 * (1.0 + np.trace(h, axis1=1, axis2=2) / rank)
            h = h + ridge[:, None, None] * np.eye(rank)
            direction = -np.linalg.solve(h, g[..., None])[..., 0]
            slope = np.einsum("ar,ar->a", g, direction)
            f0 = objective[idx]
            slack = 4.0 * _EPS * np.maximum(1.0, np.abs(f0))

            step = np.ones(idx.size)
            accepted = np.zeros(idx.size, dtype=bool)
            start = e[idx]
            for _ in range(MAX_BACKTRACKS):
                pending = np.flatnonzero(~accepted)
                if pending.size == 0:
                    break
                trial = start[pending] + step[pending, None] * direction[pending]
                value = _objective(design, trial, t[idx[pending]], m[idx[pending]])
                ok = np.isfinite(value) & (
                    value <= f0[pending] + ARMIJO_SLOPE * step[pending] * slope[pending] + slack[pending]
                )
                eta[active[idx[pending[ok]]]] = trial[ok]
                accepted[pending[ok]] = True
                step[pending[~ok]] *= ARMIJO_FACTOR

            stalled = idx[~accepted]
            if stalled.size:
                good = res[stalled] <= accept
                converged[active[stalled[good]]] = True
                log.debug("line search stalled for %d fits (%d within tolerance)", stalled.size, int(good.sum()))
                done[stalled] = True

        active = active[~done]

    return Solution(eta, log_probs, residual, iterations, converged, pruned, capped)


def moment_keys(counts: FloatArray | IntArray, features: FloatArray) -> FloatArray:
    """Raw feature sums of count tables; two tables with equal keys have the same fit."""
    sums = np.einsum("gvc,vcf->gf", np.asarray(counts, dtype=np.float64), features)
    return np.round(sums, MOMENT_KEY_DECIMALS) + 0.0


class EntropyOracle:
    """Maximum (conditional) entropy of the fit to each count table, memoised by feature sums.

    All count tables handed to one oracle must share the per-context totals the
    design's weights were built from.
    """

    def __init__(self, design: LogLinearDesign) -> None:
        self.design = design
        self._cache: Dict[bytes, float] = {}
        self.fits = 0

    def __call__(self, counts: FloatArray | IntArray) -> FloatArray:
        counts = np.asarray(counts, dtype=np.float64)
        design = self.design
        contexts, labels, _ = design.shape
        if counts.shape[0] == 0:
            return np.zeros(0)

        if design.rank == 0:
            return np.full(counts.shape[0], math.log(labels))

        if design.saturated:
            totals = counts.sum(axis=2, keepdims=True)
            with np.errstate(divide="ignore", invalid="ignore"):
                log_p = np.where(counts > 0, np.log(counts / np.where(totals > 0, totals, 1.0)), -np.inf)
            return np.asarray(entropy_of(log_p, axis=2) @ design.weights, dtype=np.float64)

        keys = moment_keys(counts, design.features)
        unique, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
        values = np.empty(unique.shape[0])
        missing = []
        for i, row in enumerate(unique):
            cached = self._cache.get(row.tobytes())
            if cached is None:
                missing.append(i)
            else:
                values[i] = cached

        if missing:
            rows = np.asarray(missing)
            solution = solve(design, design.targets_from_counts(counts[first[rows]]))
            solution.raise_for_failures("maximum entropy fits")
            fitted = solution.entropies(design.weights)
            values[rows] = fitted
            for i, value in zip(rows.tolist(), fitted.tolist()):
                self._cache[unique[i].tobytes()] = value
            self.fits += rows.size

        return values[np.asarray(inverse).reshape(-1)]
