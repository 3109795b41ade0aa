import logging
from typing import Callable, Iterator
from pathlib import Path

import pytest

from maxent_nml.types import ExpressionMatrix
from maxent_nml.pipeline import make_synthetic_matrix

pytest.register_assert_rewrite("tests.utils")

logging.getLogger("maxent_nml").setLevel(logging.DEBUG)


@pytest.fixture
def write_file(tmp_path: Path) -> Iterator[Callable[[str, str], Path]]:
    def write(name: str, content: str) -> Path:
        path = tmp_path / name
        path.write_text(content, encoding="utf-8")
        return path

    yield write


@pytest.fixture(scope="session")
def small_matrix() -> ExpressionMatrix:
    """Two informative and two noise genes, 14 train and 10 test columns."""
    return make_synthetic_matrix(2, 2, train_sizes=(8, 6), test_sizes=(6, 4), seed=3, separation=1.0, spread=0.1)
