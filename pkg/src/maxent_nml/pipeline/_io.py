from __future__ import annotations

import re
import math
import logging
from typing import Dict, List, Tuple, Mapping, Sequence
from pathlib import Path

import numpy as np
import pandas as pd

from ..types import ExpressionMatrix
from .._types import SplitTag
from .._exceptions import ParseError, LabelMismatchError

__all__ = ["load_tokens", "load_matrix", "write_matrix", "write_labels", "write_table"]

log: logging.Logger = logging.getLogger(__name__)

_LINE_RE = re.compile(r"line (\d+)")


def _sniff_delimiter(path: Path) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            if line.strip() and not line.startswith("#"):
                return "\t" if "\t" in line else ","
    raise ParseError("file is empty", path=str(path))


def _read_cells(path: Path, *, comment: str | None = None) -> pd.DataFrame:
    """Every cell as a string; missing trailing cells come back as NaN."""
    try:
        return pd.read_csv(
            path,
            sep=_sniff_delimiter(path),
            header=None,
            dtype=str,
            na_filter=False,
            comment=comment,
            skip_blank_lines=True,
        )
    except pd.errors.ParserError as err:
        match = _LINE_RE.search(str(err))
        raise ParseError(
            f"ragged row: {str(err).strip()}", path=str(path), line=int(match.group(1)) if match else None
        ) from err
    except pd.errors.EmptyDataError as err:
        raise ParseError("file is empty", path=str(path)) from err


def _to_float(cells: pd.DataFrame, path: Path) -> np.ndarray:  # type: ignore[type-arg]
    raw = cells.to_numpy(dtype=object)
    try:
        values = raw.astype(np.float64)
    except ValueError:
        values = None
    if values is not None and np.all(np.isfinite(values)):
        return values
    for (row, col), cell in np.ndenumerate(raw):
        try:
            ok = math.isfinite(float(cell))
        except ValueError:
            ok = False
        if not ok:
            # one-based, counting the header row and the gene id column
            raise ParseError(f"invalid expression value {cell!r}", path=str(path), line=row + 2, column=col + 2)
    raise AssertionError("unreachable")


def _read_labels(path: Path, sample_ids: Sequence[str]) -> Dict[str, Tuple[str, SplitTag]]:
    cells = _read_cells(path, comment="#")
    width = cells.shape[1]
    if width not in (2, 3):
        raise ParseError(f"labels file must have 2 or 3 columns, got {width}", path=str(path))
    if cells.isna().to_numpy().any():
        row = int(np.flatnonzero(cells.isna().to_numpy().any(axis=1))[0])
        raise ParseError("ragged row in labels file", path=str(path), line=row + 1)

    known = set(sample_ids)
    rows = cells.to_numpy(dtype=str).tolist()
    if rows and rows[0][0].strip() not in known:
        log.debug("treating the first row of %s as a header", path)
        rows = rows[1:]

    labels: Dict[str, Tuple[str, SplitTag]] = {}
    for row in rows:
        sample_id = row[0].strip()
        label = row[1].strip()
        split = row[2].strip().lower() if width == 3 else "train"
        if sample_id not in known:
            raise LabelMismatchError(
                f"label given for unknown sample {sample_id!r}", path=str(path), sample_id=sample_id
            )
        if sample_id in labels:
            raise LabelMismatchError(f"sample {sample_id!r} is labelled twice", path=str(path), sample_id=sample_id)
        if split not in ("train", "test"):
            raise ParseError(f"split of sample {sample_id!r} must be train or test, got {split!r}", path=str(path))
        labels[sample_id] = (label, split)  # type: ignore[assignment]
    return labels


def load_tokens(path: str | Path) -> List[Tuple[str, int, int]]:
    """Whitespace- or comma-separated tokens with their one-based line and column; `#` starts a comment."""
    tokens: List[Tuple[str, int, int]] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            fields = [field for field in re.split(r"[\s,]+", line.split("#", 1)[0]) if field]
            tokens.extend((field, line_no, column) for column, field in enumerate(fields, start=1))
    if not tokens:
        raise ParseError("file holds no values", path=str(path))
    return tokens


def load_matrix(path: str | Path, labels_path: str | Path) -> ExpressionMatrix:
    """Read a genes-by-samples matrix and its labels file.

    The matrix has a header row of sample ids and the gene id in the first
    column; the delimiter (tab or comma) is detected from the first line. The
    labels file holds `sample_id, class[, train|test]` rows, optionally under a
    header; `#` starts a comment.
    """
    path = Path(path)
    labels_path = Path(labels_path)
    cells = _read_cells(path)
    if cells.shape[0] < 2 or cells.shape[1] < 2:
        raise ParseError("matrix needs a header row, at least one gene and one sample", path=str(path))

    missing = cells.isna().to_numpy()
    if missing.any():
        row = int(np.flatnonzero(missing.any(axis=1))[0])
        raise ParseError(f"ragged row: expected {cells.shape[1]} fields", path=str(path), line=row + 1)

    sample_ids = [value.strip() for value in cells.iloc[0, 1:].tolist()]
    if len(set(sample_ids)) != len(sample_ids):
        raise ParseError("duplicate sample ids in the header row", path=str(path), line=1)
    gene_ids = [value.strip() for value in cells.iloc[1:, 0].tolist()]
    values = _to_float(cells.iloc[1:, 1:], path)

    labels = _read_labels(labels_path, sample_ids)
    for sample_id in sample_ids:
        if sample_id not in labels:
            raise LabelMismatchError(
                f"no label for sample {sample_id!r}", path=str(labels_path), sample_id=sample_id
            )

    class_names = sorted({label for label, _ in labels.values()})
    index = {name: i for i, name in enumerate(class_names)}
    log.info(
        "loaded %d genes x %d samples in %d classes from %s", len(gene_ids), len(sample_ids), len(class_names), path
    )
    return ExpressionMatrix(
        gene_ids=gene_ids,
        sample_ids=sample_ids,
        values=values,
        labels=[index[labels[sample_id][0]] for sample_id in sample_ids],
        class_names=class_names,
        split=[labels[sample_id][1] for sample_id in sample_ids],
    )


def write_matrix(matrix: ExpressionMatrix, path: str | Path) -> None:
    """Write the matrix in the tab-separated layout `load_matrix` reads."""
    frame = pd.DataFrame(np.asarray(matrix.values), index=matrix.gene_ids, columns=matrix.sample_ids)
    frame.index.name = "gene_id"
    frame.to_csv(path, sep="\t", float_format="%.6f")


def write_labels(matrix: ExpressionMatrix, path: str | Path) -> None:
    frame = pd.DataFrame(
        {
            "sample_id": matrix.sample_ids,
            "label": [matrix.class_names[label] for label in matrix.labels],
            "split": matrix.split,
        }
    )
    frame.to_csv(path, sep="\t", index=False)


def write_table(frame: pd.DataFrame, path: str | Path, header: Mapping[str, str] | List[Tuple[str, str]]) -> None:
    """Write `frame` as CSV below `# key: value` comment lines."""
    items = header.items() if isinstance(header, Mapping) else header
    with open(path, "w", encoding="utf-8", newline="") as handle:
        for key, value in items:
            handle.write(f"# {key}: {value}\n")
        frame.to_csv(handle, index=False, float_format="%.10f", lineterminator="\n")
