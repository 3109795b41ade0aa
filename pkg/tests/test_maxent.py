from __future__ import annotations

import math
import itertools

import numpy as np
import pytest

from maxent_nml import (
    Alphabet,
    MomentVector,
    FeatureTable,
    InvalidInputError,
    FeatureRangeError,
    InfeasibleConstraintsError,
    entropy,
    fit_maxent,
    dual_gradient,
    dual_objective,
    log_likelihood,
    empirical_moments,
    build_moment_features,
    build_indicator_features,
)

from .utils import sample_of


def test_moment_features_are_powers() -> None:
    table = build_moment_features(Alphabet(symbols=[0, 1, 2]), 2)
    assert table.as_array().T.tolist() == [[0.0, 1.0, 2.0], [0.0, 1.0, 4.0]]
    assert table.kind == "moment"


def test_moment_features_seventh_power() -> None:
    table = build_moment_features(Alphabet.levels(5), 7)
    assert table.as_array()[:, 6].tolist() == [0.0, 1.0, 128.0, 2187.0, 16384.0]


def test_zero_moments_is_empty_table() -> None:
    table = build_moment_features(Alphabet.levels(4), 0)
    assert table.num_features == 0
    assert table.num_symbols == 4


def test_moment_features_overflow() -> None:
    with pytest.raises(FeatureRangeError):
        build_moment_features(Alphabet(symbols=[0.0, 1e200]), 2)


def test_negative_moment_count() -> None:
    with pytest.raises(InvalidInputError):
        build_moment_features(Alphabet.levels(3), -1)


def test_indicator_features_span_simplex() -> None:
    table = build_indicator_features(Alphabet.levels(3))
    assert table.as_array().tolist() == [[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]


@pytest.mark.parametrize(
    "indices, symbols, m, expected",
    [
        ((0, 1, 0, 1), [0, 1], 1, [0.5]),
        ((0, 0, 0, 1), [0, 1], 1, [0.25]),
        ((2, 2, 2), [0, 1, 2], 2, [2.0, 4.0]),
    ],
    ids=["balanced", "skewed", "boundary"],
)
def test_empirical_moments(indices: tuple[int, ...], symbols: list[float], m: int, expected: list[float]) -> None:
    features = build_moment_features(Alphabet(symbols=symbols), m)
    assert empirical_moments(sample_of(*indices), features).means == pytest.approx(expected)


def test_empirical_moments_out_of_alphabet() -> None:
    with pytest.raises(InvalidInputError):
        empirical_moments(sample_of(0, 3), build_moment_features(Alphabet.levels(2), 1))


def test_fit_uniform() -> None:
    dist = fit_maxent(build_moment_features(Alphabet.levels(3), 1), MomentVector(means=[1.0]))
    assert dist.probs == pytest.approx([1 / 3, 1 / 3, 1 / 3], abs=1e-9)
    assert dist.entropy_nats == pytest.approx(math.log(3), abs=1e-9)
    assert not dist.boundary


def test_fit_binary_mean() -> None:
    dist = fit_maxent(build_moment_features(Alphabet.levels(2), 1), MomentVector(means=[0.25]))
    assert dist.probs == pytest.approx([0.75, 0.25], abs=1e-9)
    assert dist.entropy_nats == pytest.approx(0.5623, abs=1e-4)


def test_fit_point_mass() -> None:
    dist = fit_maxent(build_moment_features(Alphabet.levels(3), 1), MomentVector(means=[0.0]))
    assert dist.probs == pytest.approx([1.0, 0.0, 0.0], abs=1e-12)
    assert dist.probs[1] == 0.0
    assert dist.support == [0]
    assert dist.boundary
    assert dist.entropy_nats == pytest.approx(0.0, abs=1e-12)


def test_fit_face_of_polytope() -> None:
    # E[x] = 2, E[x^2] = 4 on {0,1,2} forces all mass onto the symbol 2
    dist = fit_maxent(build_moment_features(Alphabet.levels(3), 2), MomentVector(means=[2.0, 4.0]))
    assert dist.probs == pytest.approx([0.0, 0.0, 1.0], abs=1e-12)
    assert dist.boundary


def test_fit_infeasible() -> None:
    with pytest.raises(InfeasibleConstraintsError) as exc:
        fit_maxent(build_moment_features(Alphabet.levels(2), 1), MomentVector(means=[1.5]))
    assert exc.value.slack > 0
    assert exc.value.exit_code == 3


def test_fit_wrong_number_of_moments() -> None:
    with pytest.raises(InvalidInputError):
        fit_maxent(build_moment_features(Alphabet.levels(3), 2), MomentVector(means=[1.0]))


def test_fit_matches_grid_search() -> None:
    features = build_moment_features(Alphabet.levels(5), 2)
    dist = fit_maxent(features, MomentVector(means=[1.0, 2.0]))
    assert dist.residual < 1e-8

    # p = (a, b, c, d, e); the two moments and normalisation leave two free coordinates
    best = 0.0
    grid = np.linspace(0.0, 1.0, 401)
    for d, e in itertools.product(grid, grid):
        # b + 2c = 1 - 3d - 4e and b + 4c = 2 - 9d - 16e
        c = (1.0 - 6.0 * d - 12.0 * e) / 2.0
        b = 1.0 - 3.0 * d - 4.0 * e - 2.0 * c
        a = 1.0 - b - c - d - e
        p = np.array([a, b, c, d, e])
        if p.min() < 0:
            continue
        positive = p[p > 0]
        best = max(best, float(-(positive * np.log(positive)).sum()))
    assert dist.entropy_nats >= best - 1e-4
    assert dist.entropy_nats <= best + 1e-2


def test_fit_without_features_is_uniform() -> None:
    dist = fit_maxent(build_moment_features(Alphabet.levels(4), 0), MomentVector(means=[]))
    assert dist.probs == pytest.approx([0.25] * 4)
    assert dist.lambdas == pytest.approx([math.log(4)])


def test_lambdas_reproduce_probs() -> None:
    features = build_moment_features(Alphabet.levels(4), 2)
    dist = fit_maxent(features, MomentVector(means=[1.2, 2.5]))
    phi = features.as_array()
    lambdas = np.asarray(dist.lambdas)
    probs = np.exp(-lambdas[0] - phi @ lambdas[1:])
    assert probs == pytest.approx(dist.probs, abs=1e-9)


def test_entropy() -> None:
    dist = fit_maxent(build_moment_features(Alphabet.levels(5), 1), MomentVector(means=[2.0]))
    assert entropy(dist) == pytest.approx(math.log(5), abs=1e-9)

    point = fit_maxent(build_moment_features(Alphabet.levels(3), 1), MomentVector(means=[0.0]))
    assert entropy(point) == 0.0


def test_log_likelihood() -> None:
    uniform = fit_maxent(build_moment_features(Alphabet.levels(2), 1), MomentVector(means=[0.5]))
    assert log_likelihood(uniform, sample_of(0, 1, 1, 0)) == pytest.approx(-4 * math.log(2), abs=1e-9)

    skewed = fit_maxent(build_moment_features(Alphabet.levels(2), 1), MomentVector(means=[0.25]))
    assert log_likelihood(skewed, sample_of(0, 0, 0, 1)) == pytest.approx(-2.2493, abs=1e-4)


def test_log_likelihood_outside_support() -> None:
    point = fit_maxent(build_moment_features(Alphabet.levels(2), 1), MomentVector(means=[0.0]))
    assert log_likelihood(point, sample_of(0, 0)) == 0.0
    assert log_likelihood(point, sample_of(0, 1)) == -math.inf


@pytest.mark.parametrize("indices", [(0, 1, 2, 2, 3), (1, 1, 2, 0, 3, 3, 2)], ids=["n=5", "n=7"])
def test_likelihood_equals_minus_n_entropy(indices: tuple[int, ...]) -> None:
    sample = sample_of(*indices)
    features = build_moment_features(Alphabet.levels(4), 2)
    dist = fit_maxent(features, empirical_moments(sample, features))
    assert log_likelihood(dist, sample) == pytest.approx(-sample.n * dist.entropy_nats, abs=1e-8)


def test_dual_at_optimum() -> None:
    features = build_moment_features(Alphabet.levels(4), 2)
    moments = MomentVector(means=[1.4, 3.0])
    dist = fit_maxent(features, moments)
    optimum = dist.lambdas[1:]

    assert dual_gradient(features, moments, optimum) == pytest.approx([0.0, 0.0], abs=1e-8)
    assert dual_objective(features, moments, optimum) == pytest.approx(dist.entropy_nats, abs=1e-8)

    rng = np.random.default_rng(0)
    for _ in range(20):
        other = np.asarray(optimum) + rng.normal(scale=0.5, size=2)
        assert dual_objective(features, moments, other.tolist()) >= dist.entropy_nats - 1e-10


def test_custom_feature_table() -> None:
    features = FeatureTable(values=[[1.0], [0.0], [0.0]])
    dist = fit_maxent(features, MomentVector(means=[0.5]))
    assert dist.probs == pytest.approx([0.5, 0.25, 0.25], abs=1e-9)


def test_dual_gradient_matches_finite_differences() -> None:
    rng = np.random.default_rng(3)
    step = 1e-6
    for _ in range(10):
        size = int(rng.integers(3, 6))
        m = int(rng.integers(1, size))
        features = build_moment_features(Alphabet.levels(size), m)
        moments = empirical_moments(sample_of(*rng.integers(0, size, size=12).tolist()), features)
        lambdas = rng.normal(scale=0.3, size=m)
        numeric = []
        for k in range(m):
            shift = np.zeros(m)
            shift[k] = step
            upper = dual_objective(features, moments, (lambdas + shift).tolist())
            lower = dual_objective(features, moments, (lambdas - shift).tolist())
            numeric.append((upper - lower) / (2 * step))
        assert dual_gradient(features, moments, lambdas.tolist()) == pytest.approx(numeric, rel=1e-5, abs=1e-6)


def test_entropy_decreases_with_nested_features() -> None:
    rng = np.random.default_rng(8)
    for _ in range(10):
        size = int(rng.integers(3, 6))
        sample = sample_of(*rng.integers(0, size, size=int(rng.integers(2, 10))).tolist())
        full = build_moment_features(Alphabet.levels(size), size - 1)
        entropies = [
            fit_maxent(full.prefix(width), empirical_moments(sample, full.prefix(width))).entropy_nats
            for width in range(size)
        ]
        assert all(later <= earlier + 1e-9 for earlier, later in zip(entropies, entropies[1:]))


@pytest.mark.parametrize("saturating", ["moments", "indicators"])
def test_saturated_fit_is_the_empirical_type(saturating: str) -> None:
    alphabet = Alphabet.levels(4)
    sample = sample_of(0, 1, 1, 3, 3, 3, 2, 1)
    features = build_moment_features(alphabet, 3) if saturating == "moments" else build_indicator_features(alphabet)
    dist = fit_maxent(features, empirical_moments(sample, features))
    assert dist.probs == pytest.approx((sample.counts(4) / sample.n).tolist(), abs=1e-9)


def test_interior_fits_meet_the_moments() -> None:
    rng = np.random.default_rng(21)
    for _ in range(500):
        size = int(rng.integers(3, 7))
        features = build_moment_features(Alphabet.levels(size), int(rng.integers(1, size)))
        phi = features.as_array()
        means = rng.dirichlet(np.full(size, 2.0)) @ phi
        dist = fit_maxent(features, MomentVector(means=means.tolist()))
        assert not dist.boundary
        assert dist.residual <= 1e-8
        assert np.abs(dist.as_array() @ phi - means).max() <= 1e-8
