from __future__ import annotations

import math

import numpy as np
import pytest

from maxent_nml import (
    Sample,
    Alphabet,
    ClassSet,
    Candidate,
    CandidateSet,
    FeatureTable,
    SelectionError,
    InvalidInputError,
    select_by_nml,
    nml_codelength,
    select_by_minimax,
    build_moment_features,
    build_cond_moment_features,
)

BINARY = Alphabet.levels(2)


def _moment_candidates(alphabet: Alphabet, ms: list[int]) -> CandidateSet:
    return CandidateSet(
        candidates=[Candidate(id=f"m={m}", features=build_moment_features(alphabet, m)) for m in ms]
    )


def test_single_candidate() -> None:
    sample = Sample.of([0, 1, 1, 0, 1])
    result = select_by_nml(_moment_candidates(BINARY, [0]), sample)
    assert result.chosen_id == "m=0"
    assert result.chosen.score_nats == pytest.approx(5 * math.log(2))
    assert result.criterion == "nml"


def test_noise_prefers_fewest_features() -> None:
    sample = Sample.of([0, 1] * 6)
    result = select_by_nml(_moment_candidates(BINARY, [0, 1, 2]), sample, "exact")
    assert result.chosen_id == "m=0"
    assert [row.id for row in result.rows] == ["m=0", "m=1", "m=2"]


def test_skewed_sample_prefers_a_moment() -> None:
    sample = Sample.of([0] * 10 + [1] * 2)
    result = select_by_nml(_moment_candidates(BINARY, [0, 1, 2]), sample, "exact")
    assert result.chosen_id in {"m=1", "m=2"}


def test_scores_are_nml_codelengths() -> None:
    sample = Sample.of([0, 0, 1, 2, 2, 2, 1])
    alphabet = Alphabet.levels(3)
    result = select_by_nml(_moment_candidates(alphabet, [1, 2]), sample)
    for row, m in zip(result.rows, [1, 2]):
        assert row.report is not None
        expected = nml_codelength(build_moment_features(alphabet, m), sample)
        assert row.score_nats == pytest.approx(expected.nml_nats)


@pytest.mark.parametrize("seed", range(100))
def test_injected_complexity_reduces_to_minimax(seed: int) -> None:
    rng = np.random.default_rng(seed)
    size = int(rng.integers(3, 6))
    sample = Sample.of(rng.integers(0, size, size=int(rng.integers(4, 16))))
    tables = [FeatureTable(values=rng.normal(size=(size, int(rng.integers(1, 3)))).tolist()) for _ in range(4)]
    candidates = CandidateSet(candidates=[Candidate(id=f"c{i}", features=table) for i, table in enumerate(tables)])
    injected = select_by_nml(candidates, sample, comp_override=1.5)
    minimax = select_by_minimax(candidates, sample)
    assert injected.chosen_id == minimax.chosen_id
    assert all(row.report is not None and row.report.method == "injected" for row in injected.rows)


def test_minimax_prefers_informative_superset() -> None:
    sample = Sample.of([0, 0, 0, 2, 2, 2, 1])
    candidates = _moment_candidates(Alphabet.levels(3), [1, 2])
    result = select_by_minimax(candidates, sample)
    assert result.chosen_id == "m=2"
    assert result.criterion == "minimax"
    assert result.chosen.report is None
    assert result.rows[1].entropy_nats < result.rows[0].entropy_nats


def test_minimax_tie_goes_to_smaller_id() -> None:
    sample = Sample.of([0, 1, 2, 3])
    # both candidates fit the uniform distribution
    candidates = CandidateSet(
        candidates=[
            Candidate(id="b", features=FeatureTable(values=[[1.0], [0.0], [1.0], [0.0]])),
            Candidate(id="a", features=FeatureTable(values=[[0.0], [1.0], [1.0], [0.0]])),
        ]
    )
    result = select_by_minimax(candidates, sample)
    assert all(row.entropy_nats == pytest.approx(math.log(4)) for row in result.rows)
    assert result.chosen_id == "a"


def test_tie_compares_ids_numerically() -> None:
    sample = Sample.of([0, 1, 2, 3])
    candidates = CandidateSet(
        candidates=[
            Candidate(id="m=10", features=FeatureTable(values=[[1.0], [0.0], [1.0], [0.0]])),
            Candidate(id="m=2", features=FeatureTable(values=[[0.0], [1.0], [1.0], [0.0]])),
        ]
    )
    assert select_by_minimax(candidates, sample).chosen_id == "m=2"
    assert select_by_nml(candidates, sample, comp_override=1.5).chosen_id == "m=2"


def test_minimax_matches_grid_argmin() -> None:
    sample = Sample.of([0, 0, 1, 3, 3, 3, 2, 0])
    candidates = CandidateSet(
        candidates=[
            Candidate(id="low", features=FeatureTable(values=[[1.0], [1.0], [0.0], [0.0]])),
            Candidate(id="ends", features=FeatureTable(values=[[1.0], [0.0], [0.0], [1.0]])),
        ]
    )
    # one indicator constraint on a set S of two symbols: the fit is uniform within S and its complement
    def grouped_entropy(mass: float) -> float:
        return -(mass * math.log(mass / 2) + (1 - mass) * math.log((1 - mass) / 2))

    entropies = {"low": grouped_entropy(4 / 8), "ends": grouped_entropy(6 / 8)}
    result = select_by_minimax(candidates, sample)
    assert result.chosen_id == min(entropies, key=entropies.__getitem__)
    for row in result.rows:
        assert row.entropy_nats == pytest.approx(entropies[row.id], abs=1e-9)


def test_conditional_candidates() -> None:
    x = Sample.of([0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2])
    y = [0, 0, 0, 0, 0, 1, 0, 1, 1, 1, 1, 1]
    classes = ClassSet.numbered(2)
    alphabet = Alphabet.levels(3)
    candidates = CandidateSet(
        candidates=[
            Candidate(id=f"m={m}", features=build_cond_moment_features(alphabet, classes, m)) for m in (0, 1)
        ]
    )
    result = select_by_nml(candidates, x, labels=y)
    assert result.chosen_id == "m=1"
    assert select_by_minimax(candidates, x, labels=y).chosen_id == "m=1"


def test_conditional_candidates_need_labels() -> None:
    candidates = CandidateSet(
        candidates=[
            Candidate(
                id="m=1",
                features=build_cond_moment_features(Alphabet.levels(2), ClassSet.numbered(2), 1),
            )
        ]
    )
    with pytest.raises(InvalidInputError):
        select_by_nml(candidates, Sample.of([0, 1]))


def test_failing_candidate_is_recorded() -> None:
    sample = Sample.of([0, 1, 0, 1, 1, 0, 1, 1, 0, 1, 0, 1, 1, 0, 1, 1, 0, 1, 0, 1, 1])
    result = select_by_nml(_moment_candidates(BINARY, [0, 1]), sample, "exact")
    assert result.chosen_id == "m=0"
    assert "m=1" in result.failures
    assert [row.id for row in result.rows] == ["m=0"]


def test_every_candidate_failing() -> None:
    sample = Sample.of([0, 1] * 11)
    with pytest.raises(SelectionError) as exc:
        select_by_nml(_moment_candidates(BINARY, [1, 2]), sample, "exact")
    assert set(exc.value.failures) == {"m=1", "m=2"}


def test_worker_count_does_not_change_result() -> None:
    sample = Sample.of([0, 0, 1, 2, 2, 2, 1, 0])
    candidates = _moment_candidates(Alphabet.levels(3), [0, 1, 2])
    serial = select_by_nml(candidates, sample)
    parallel = select_by_nml(candidates, sample, workers=2)
    assert serial == parallel


def test_candidate_set_validation() -> None:
    with pytest.raises(InvalidInputError):
        CandidateSet(candidates=[])
    with pytest.raises(InvalidInputError):
        _moment_candidates(BINARY, [1, 1])
    with pytest.raises(InvalidInputError):
        CandidateSet(
            candidates=[
                Candidate(id="a", features=build_moment_features(BINARY, 1)),
                Candidate(id="b", features=build_moment_features(Alphabet.levels(3), 1)),
            ]
        )
