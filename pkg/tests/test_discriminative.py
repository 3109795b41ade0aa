from __future__ import annotations

import math
import itertools

import numpy as np
import pytest

from maxent_nml import (
    Sample,
    Alphabet,
    ClassSet,
    CapExceededError,
    InvalidInputError,
    cond_nml,
    comp_by_types,
    nml_codelength,
    cond_comp_exact,
    fit_conditional,
    cond_comp_grouped,
    cond_err_codelength,
    conditional_gradient,
    build_moment_features,
    cond_comp_monte_carlo,
    conditional_objective,
    build_cond_moment_features,
    conditional_log_likelihood,
)

from .utils import bernoulli_entropy

BINARY = ClassSet.numbered(2)


def _random_instance(seed: int, n: int = 20, levels: int = 3) -> tuple[Sample, np.ndarray]:
    rng = np.random.default_rng(seed)
    x = rng.integers(0, levels, size=n)
    # labels depend on x but are not separable
    y = (rng.random(n) < 0.25 + 0.25 * x).astype(np.int64)
    return Sample.of(x), y


@pytest.mark.parametrize(
    "num_classes, m, intercept, expected",
    [(2, 1, True, 2), (2, 0, True, 1), (3, 2, True, 6), (2, 2, False, 2)],
    ids=["binary m=1", "intercept only", "3 classes m=2", "no intercept"],
)
def test_feature_count(num_classes: int, m: int, intercept: bool, expected: int) -> None:
    table = build_cond_moment_features(Alphabet.levels(2), ClassSet.numbered(num_classes), m, intercept=intercept)
    assert table.num_features == expected
    assert table.order == m


def test_reference_class_features_are_zero() -> None:
    table = build_cond_moment_features(Alphabet.levels(3), BINARY, 1)
    phi = table.as_array()
    assert not phi[:, 0, :].any()
    assert phi[:, 1, :].tolist() == [[1.0, 0.0], [1.0, 1.0], [1.0, 2.0]]


def test_no_features_rejected() -> None:
    with pytest.raises(InvalidInputError):
        build_cond_moment_features(Alphabet.levels(2), BINARY, 0, intercept=False)


def test_intercept_only_matches_marginals() -> None:
    x = Sample.of([0, 0, 1, 1, 2, 2, 0, 1])
    y = [0, 1, 0, 0, 1, 0, 0, 0]
    model = fit_conditional(build_cond_moment_features(Alphabet.levels(3), BINARY, 0), x, y)
    for row in model.cond_probs:
        assert row == pytest.approx([0.75, 0.25], abs=1e-9)
    assert model.cond_entropy_nats == pytest.approx(bernoulli_entropy(0.25), abs=1e-9)


def test_separable_data() -> None:
    x = Sample.of([0, 0, 0, 1, 1, 1])
    y = [0, 0, 0, 1, 1, 1]
    features = build_cond_moment_features(Alphabet.levels(2), BINARY, 1)
    model = fit_conditional(features, x, y)
    assert model.boundary
    assert model.cond_entropy_nats == pytest.approx(0.0, abs=1e-6)
    assert cond_err_codelength(features, x, y) == pytest.approx(0.0, abs=1e-6)
    assert model.cond_probs[0][0] == pytest.approx(1.0, abs=1e-6)
    assert model.cond_probs[1][1] == pytest.approx(1.0, abs=1e-6)


def test_fit_beats_random_multipliers() -> None:
    x, y = _random_instance(0)
    features = build_cond_moment_features(Alphabet.levels(3), BINARY, 1)
    model = fit_conditional(features, x, y)
    best = conditional_objective(features, x, y, model.lambdas)

    rng = np.random.default_rng(1)
    draws = rng.normal(scale=3.0, size=(10_000, features.num_features))
    for lambdas in draws:
        assert conditional_objective(features, x, y, lambdas.tolist()) >= best - 1e-9


def test_gradient_vanishes_at_fit() -> None:
    x, y = _random_instance(2)
    features = build_cond_moment_features(Alphabet.levels(3), BINARY, 2)
    model = fit_conditional(features, x, y)
    assert conditional_gradient(features, x, y, model.lambdas) == pytest.approx([0.0] * 3, abs=1e-6)


def test_gradient_matches_finite_differences() -> None:
    x, y = _random_instance(3)
    features = build_cond_moment_features(Alphabet.levels(3), BINARY, 2)
    lambdas = np.random.default_rng(8).normal(scale=0.5, size=features.num_features)
    analytic = np.asarray(conditional_gradient(features, x, y, lambdas.tolist()))

    step = 1e-6
    numeric = np.empty_like(analytic)
    for k in range(lambdas.size):
        shift = np.zeros_like(lambdas)
        shift[k] = step
        upper = conditional_objective(features, x, y, (lambdas + shift).tolist())
        lower = conditional_objective(features, x, y, (lambdas - shift).tolist())
        numeric[k] = (upper - lower) / (2 * step)
    assert numeric == pytest.approx(analytic, rel=1e-5, abs=1e-6)


def test_err_is_minus_log_likelihood() -> None:
    x, y = _random_instance(4)
    features = build_cond_moment_features(Alphabet.levels(3), BINARY, 1)
    model = fit_conditional(features, x, y)
    assert cond_err_codelength(features, x, y) == pytest.approx(
        -conditional_log_likelihood(model, x, y), abs=1e-7
    )


def test_conditional_likelihood_of_impossible_label() -> None:
    x = Sample.of([0, 1])
    features = build_cond_moment_features(Alphabet.levels(2), BINARY, 1)
    model = fit_conditional(features, x, [0, 1])
    assert conditional_log_likelihood(model, x, [1, 0]) == -math.inf


def test_label_length_mismatch() -> None:
    with pytest.raises(InvalidInputError):
        fit_conditional(build_cond_moment_features(Alphabet.levels(2), BINARY, 1), Sample.of([0, 1]), [0])


def test_baseline_err() -> None:
    x = Sample.of(np.arange(38) % 5)
    y = [0] * 27 + [1] * 11
    features = build_cond_moment_features(Alphabet.levels(5), BINARY, 0)
    assert cond_err_codelength(features, x, y) == pytest.approx(22.87, abs=0.01)
    assert cond_err_codelength(features, x, y) == pytest.approx(38 * bernoulli_entropy(11 / 38), abs=1e-8)


def test_balanced_independent_labels_cost_n_ln2() -> None:
    x = Sample.of([0, 0, 1, 1, 2, 2])
    y = [0, 1, 0, 1, 1, 0]
    features = build_cond_moment_features(Alphabet.levels(3), BINARY, 0)
    assert cond_err_codelength(features, x, y) == pytest.approx(6 * math.log(2), abs=1e-9)


def test_exact_intercept_only() -> None:
    features = build_cond_moment_features(Alphabet.levels(2), BINARY, 0)
    assert cond_comp_exact(features, Sample.of([0, 1])) == pytest.approx(math.log(2.5), abs=1e-9)


@pytest.mark.parametrize("num_classes", [2, 3])
def test_exact_single_observation(num_classes: int) -> None:
    features = build_cond_moment_features(Alphabet.levels(2), ClassSet.numbered(num_classes), 1)
    assert cond_comp_exact(features, Sample.of([1])) == pytest.approx(math.log(num_classes), abs=1e-9)


def test_exact_matches_grouped() -> None:
    features = build_cond_moment_features(Alphabet.levels(2), BINARY, 1)
    x = Sample.of([0, 1, 1, 0])
    grouped = cond_comp_grouped(features, x)
    assert grouped.method == "grouped"
    assert cond_comp_exact(features, x) == pytest.approx(grouped.nats, abs=1e-9)


def test_exact_matches_grouped_with_three_levels() -> None:
    features = build_cond_moment_features(Alphabet.levels(3), ClassSet.numbered(3), 1)
    x = Sample.of([0, 1, 2, 2, 0, 1, 2])
    assert cond_comp_exact(features, x) == pytest.approx(cond_comp_grouped(features, x).nats, abs=1e-9)


def test_exact_cap() -> None:
    features = build_cond_moment_features(Alphabet.levels(2), BINARY, 1)
    with pytest.raises(CapExceededError):
        cond_comp_exact(features, Sample.of([0, 1] * 11), cap=1000)


def test_grouped_intercept_only_is_bernoulli() -> None:
    x = Sample.of(np.arange(38) % 5)
    features = build_cond_moment_features(Alphabet.levels(5), BINARY, 0)
    binary = Alphabet.levels(2)
    bernoulli = comp_by_types(build_moment_features(binary, 1), binary, 38)
    assert cond_comp_grouped(features, x).nats == pytest.approx(bernoulli, abs=1e-9)


def test_grouped_falls_back_to_monte_carlo() -> None:
    x = Sample.of(np.arange(30) % 3)
    features = build_cond_moment_features(Alphabet.levels(3), BINARY, 1)
    comp = cond_comp_grouped(features, x, cap=10, draws=500, seed=2)
    assert comp.method == "monte-carlo"
    assert comp.stderr_nats is not None


def test_monte_carlo_agrees_with_grouped() -> None:
    x = Sample.of([0, 1, 2, 0, 1, 2, 1, 0])
    features = build_cond_moment_features(Alphabet.levels(3), BINARY, 1)
    exact = cond_comp_grouped(features, x).nats
    estimate, stderr = cond_comp_monte_carlo(features, x, draws=50_000, seed=9)
    assert abs(estimate - exact) < 3 * stderr


def test_baseline_nml() -> None:
    x = Sample.of(np.arange(38) % 5)
    y = [0] * 27 + [1] * 11
    report = cond_nml(build_cond_moment_features(Alphabet.levels(5), BINARY, 0), x, y)
    assert report.nml_nats == pytest.approx(24.99, abs=0.05)
    assert report.err_nats == pytest.approx(22.87, abs=0.01)
    assert report.nml_nats < 38 * math.log(2)


def test_single_level_matches_generative() -> None:
    y = [0, 1, 1, 0, 0, 0, 1, 0, 0]
    x = Sample.of([0] * len(y))
    conditional = cond_nml(build_cond_moment_features(Alphabet.levels(5), BINARY, 3), x, y)
    binary = Alphabet.levels(2)
    generative = nml_codelength(build_moment_features(binary, 1), Sample.of(y))
    assert conditional.nml_nats == pytest.approx(generative.nml_nats, abs=1e-8)


def test_informative_levels_compress() -> None:
    x = Sample.of([0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2])
    y = [0, 0, 0, 0, 0, 1, 0, 1, 1, 1, 1, 1]
    report = cond_nml(build_cond_moment_features(Alphabet.levels(3), BINARY, 1), x, y)
    assert report.nml_nats < 12 * math.log(2)


def test_noise_labels_prefer_intercept_only() -> None:
    x = Sample.of([0, 1, 2, 0, 1, 2, 0, 1, 2, 0, 1, 2])
    y = [0, 1, 0, 1, 0, 1, 1, 0, 1, 0, 1, 0]
    baseline = cond_nml(build_cond_moment_features(Alphabet.levels(3), BINARY, 0), x, y)
    richer = cond_nml(build_cond_moment_features(Alphabet.levels(3), BINARY, 1), x, y)
    assert richer.nml_nats > baseline.nml_nats


def test_exact_and_types_methods_agree() -> None:
    x, y = _random_instance(6, n=10)
    features = build_cond_moment_features(Alphabet.levels(3), BINARY, 1)
    exact = cond_nml(features, x, y, "exact")
    grouped = cond_nml(features, x, y, "types")
    assert exact.method == "exact-enum"
    assert exact.nml_nats == pytest.approx(grouped.nml_nats, abs=1e-9)


@pytest.mark.slow
def test_grouped_seven_levels_cubic() -> None:
    x = Sample.of(np.repeat(np.arange(7), [6, 5, 6, 5, 6, 5, 5]))
    features = build_cond_moment_features(Alphabet.levels(7), BINARY, 3)
    comp = cond_comp_grouped(features, x)
    assert comp.method == "grouped"
    assert math.isfinite(comp.nats)
    quadratic = cond_comp_grouped(build_cond_moment_features(Alphabet.levels(7), BINARY, 2), x)
    assert quadratic.nats <= comp.nats + 1e-8 <= 38 * math.log(2)


@pytest.mark.parametrize("levels, n, m", list(itertools.product([2, 3], range(1, 11), [0, 1, 2])))
def test_exact_matches_grouped_grid(levels: int, n: int, m: int) -> None:
    x = Sample.of(np.random.default_rng(100 * levels + 10 * n + m).integers(0, levels, size=n))
    features = build_cond_moment_features(Alphabet.levels(levels), BINARY, m)
    assert cond_comp_exact(features, x) == pytest.approx(cond_comp_grouped(features, x).nats, abs=1e-9)


@pytest.mark.parametrize("seed", range(50))
def test_nested_conditional_features_are_monotone(seed: int) -> None:
    rng = np.random.default_rng(seed)
    levels = int(rng.integers(2, 5))
    x = Sample.of(rng.integers(0, levels, size=int(rng.integers(2, 11))))
    y = rng.integers(0, 2, size=x.n)
    errs = []
    comps = []
    for m in range(levels + 1):
        features = build_cond_moment_features(Alphabet.levels(levels), BINARY, m)
        errs.append(cond_err_codelength(features, x, y))
        comps.append(cond_comp_grouped(features, x).nats)
    assert all(later <= earlier + 1e-8 for earlier, later in zip(errs, errs[1:]))
    assert all(later >= earlier - 1e-8 for earlier, later in zip(comps, comps[1:]))
