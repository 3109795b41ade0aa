from __future__ import annotations

import math
import itertools

import numpy as np
import pytest

from maxent_nml import (
    Sample,
    Alphabet,
    CapExceededError,
    InvalidInputError,
    comp_by_types,
    err_codelength,
    nml_codelength,
    comp_exact_enum,
    comp_monte_carlo,
    build_moment_features,
    enumerate_type_classes,
    build_indicator_features,
)

from .utils import sample_of, bernoulli_entropy, multinomial_comp

BINARY = Alphabet.levels(2)


def test_err_codelength() -> None:
    features = build_moment_features(BINARY, 1)
    assert err_codelength(features, sample_of(0, 1, 0, 1)) == pytest.approx(4 * math.log(2), abs=1e-9)
    assert err_codelength(features, sample_of(0, 0, 0, 1)) == pytest.approx(2.2493, abs=1e-4)


@pytest.mark.parametrize("size", [2, 3, 5])
def test_err_codelength_without_features(size: int) -> None:
    sample = Sample.of([0, 1, 1, 0, 1])
    features = build_moment_features(Alphabet.levels(size), 0)
    assert err_codelength(features, sample) == pytest.approx(5 * math.log(size))


def test_type_classes() -> None:
    classes = list(enumerate_type_classes(3, 2))
    assert [c.counts for c in classes] == [[0, 0, 2], [0, 1, 1], [0, 2, 0], [1, 0, 1], [1, 1, 0], [2, 0, 0]]
    assert sum(math.exp(c.log_multiplicity) for c in classes) == pytest.approx(9.0)


def test_type_class_count() -> None:
    assert sum(1 for _ in enumerate_type_classes(5, 38)) == math.comb(42, 4)


def test_comp_without_features_is_zero() -> None:
    features = build_moment_features(Alphabet.levels(3), 0)
    assert comp_exact_enum(features, Alphabet.levels(3), 4) == 0.0
    assert comp_by_types(features, Alphabet.levels(3), 4) == 0.0
    assert comp_by_types(build_moment_features(Alphabet.levels(5), 0), Alphabet.levels(5), 38) == 0.0


@pytest.mark.parametrize("n, expected", [(1, math.log(2)), (2, math.log(2.5))], ids=["n=1", "n=2"])
def test_binary_comp(n: int, expected: float) -> None:
    features = build_moment_features(BINARY, 1)
    assert comp_exact_enum(features, BINARY, n) == pytest.approx(expected, abs=1e-9)
    assert comp_by_types(features, BINARY, n) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("size, n", [(2, 20), (3, 12), (4, 8)], ids=["K=2", "K=3", "K=4"])
def test_saturated_comp_is_multinomial(size: int, n: int) -> None:
    alphabet = Alphabet.levels(size)
    features = build_indicator_features(alphabet)
    assert comp_by_types(features, alphabet, n) == pytest.approx(multinomial_comp(n, size), abs=1e-9)


@pytest.mark.parametrize("size, n, m", list(itertools.product([2, 3], range(1, 7), [0, 1, 2])))
def test_exact_matches_types(size: int, n: int, m: int) -> None:
    alphabet = Alphabet.levels(size)
    features = build_moment_features(alphabet, m)
    assert comp_exact_enum(features, alphabet, n) == pytest.approx(comp_by_types(features, alphabet, n), abs=1e-9)


def test_types_worker_count_does_not_change_value() -> None:
    alphabet = Alphabet.levels(3)
    features = build_moment_features(alphabet, 1)
    assert comp_by_types(features, alphabet, 9, workers=2) == comp_by_types(features, alphabet, 9)


def test_exact_enum_cap() -> None:
    with pytest.raises(CapExceededError) as exc:
        comp_exact_enum(build_moment_features(BINARY, 1), BINARY, 21, cap=10**6)
    assert exc.value.size == 2**21
    assert exc.value.suggestion is not None


def test_types_cap_suggests_monte_carlo() -> None:
    with pytest.raises(CapExceededError, match="mc"):
        comp_by_types(build_moment_features(Alphabet.levels(5), 1), Alphabet.levels(5), 38, cap=1000)


def test_alphabet_mismatch() -> None:
    with pytest.raises(InvalidInputError):
        comp_by_types(build_moment_features(BINARY, 1), Alphabet.levels(3), 4)


def test_n_must_be_positive() -> None:
    with pytest.raises(InvalidInputError):
        comp_by_types(build_moment_features(BINARY, 1), BINARY, 0)


def test_binary_baseline_at_38() -> None:
    features = build_moment_features(BINARY, 1)
    comp = comp_by_types(features, BINARY, 38)
    assert 38 * bernoulli_entropy(11 / 38) + comp == pytest.approx(24.99, abs=0.05)


def test_monte_carlo_without_features() -> None:
    features = build_moment_features(Alphabet.levels(3), 0)
    assert comp_monte_carlo(features, Alphabet.levels(3), 10, draws=500, seed=1) == (0.0, 0.0)


def test_monte_carlo_agrees_with_types() -> None:
    features = build_moment_features(BINARY, 1)
    exact = comp_by_types(features, BINARY, 8)
    estimate, stderr = comp_monte_carlo(features, BINARY, 8, draws=100_000, seed=11)
    assert stderr > 0
    assert abs(estimate - exact) < 3 * stderr


def test_monte_carlo_is_deterministic() -> None:
    features = build_moment_features(Alphabet.levels(3), 2)
    first = comp_monte_carlo(features, Alphabet.levels(3), 12, draws=2000, seed=7)
    second = comp_monte_carlo(features, Alphabet.levels(3), 12, draws=2000, seed=7)
    assert first == second


def test_monte_carlo_needs_draws() -> None:
    with pytest.raises(InvalidInputError):
        comp_monte_carlo(build_moment_features(BINARY, 1), BINARY, 4, draws=10)


def test_nml_uncompressed_reference() -> None:
    sample = Sample.of([0] * 27 + [1] * 11)
    report = nml_codelength(build_moment_features(BINARY, 0), sample)
    assert report.nml_nats == pytest.approx(26.34, abs=0.01)
    assert report.nml_nats == pytest.approx(38 * math.log(2))
    assert report.comp_nats == 0.0
    assert report.method == "type-class"


def test_nml_hand_computed() -> None:
    features = build_moment_features(BINARY, 1)
    report = nml_codelength(features, sample_of(0, 1), "exact")
    assert report.nml_nats == pytest.approx(2 * math.log(2) + math.log(2.5), abs=1e-9)
    assert report.nml_nats == pytest.approx(2.3026, abs=1e-4)
    assert report.method == "exact-enum"
    assert report.n == 2
    assert report.num_features == 1


def test_nml_point_mass_sample() -> None:
    report = nml_codelength(build_moment_features(BINARY, 1), sample_of(0, 0, 0))
    assert report.err_nats == pytest.approx(0.0, abs=1e-9)
    assert report.nml_nats == pytest.approx(report.comp_nats, abs=1e-9)


def test_nml_monte_carlo_report() -> None:
    report = nml_codelength(build_moment_features(BINARY, 1), sample_of(0, 1, 1, 0, 1), "mc", draws=500, seed=3)
    assert report.method == "monte-carlo"
    assert report.mc_stderr_nats is not None


def test_nml_unknown_method() -> None:
    with pytest.raises(InvalidInputError):
        nml_codelength(build_moment_features(BINARY, 1), sample_of(0, 1), "magic")  # type: ignore[arg-type]


def test_nested_features_are_monotone() -> None:
    rng = np.random.default_rng(5)
    for _ in range(200):
        size = int(rng.integers(2, 6))
        n = int(rng.integers(1, 9))
        alphabet = Alphabet.levels(size)
        sample = Sample.of(rng.integers(0, size, size=n))
        full = build_moment_features(alphabet, size - 1)
        errs = []
        comps = []
        for width in range(size):
            features = full.prefix(width)
            errs.append(err_codelength(features, sample))
            comps.append(comp_by_types(features, alphabet, n))
        assert all(later <= earlier + 1e-8 for earlier, later in zip(errs, errs[1:]))
        assert all(later >= earlier - 1e-8 for earlier, later in zip(comps, comps[1:]))
