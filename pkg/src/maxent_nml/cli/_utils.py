from __future__ import annotations

import sys
import json
import contextlib
from typing import Any, Dict, List, Tuple, Mapping, Iterator
from pathlib import Path

from .. import __version__
from .._compat import model_dump
from .._models import BaseModel
from .._utils import file_digest
from .._constants import NATS_PER_BIT
from ..types import Sample, Alphabet
from ..pipeline import load_tokens
from .._exceptions import ParseError, MaxEntNMLError

TOOL = "maxent-nml"


class Colors:
    FAIL = "\033[91m"
    ENDC = "\033[0m"


def digests(paths: Mapping[str, str | Path | None]) -> Dict[str, str]:
    """sha256 of every given input file, keyed by its role."""
    return {role: file_digest(path) for role, path in paths.items() if path is not None}


EXECUTION_FIELDS = frozenset({"out", "workers", "as_json"})


def config_echo(args: BaseModel) -> Dict[str, Any]:
    """The validated config without options that only affect how or where a run executes."""
    return {key: value for key, value in model_dump(args).items() if key not in EXECUTION_FIELDS}


def envelope(command: str, args: BaseModel, inputs: Mapping[str, str | Path | None], result: Any) -> Dict[str, Any]:
    """Every artifact carries the tool version, the validated config, input digests and the seed."""
    config = config_echo(args)
    return {
        "tool": TOOL,
        "version": __version__,
        "command": command,
        "config": config,
        "inputs": digests(inputs),
        "seed": config.get("seed"),
        "result": result,
    }


def header_lines(command: str, args: BaseModel, inputs: Mapping[str, str | Path | None]) -> List[Tuple[str, str]]:
    """`# key: value` lines that open every CSV artifact."""
    lines = [
        ("tool", f"{TOOL} {__version__}"),
        ("command", command),
        ("config", json.dumps(config_echo(args), sort_keys=True)),
    ]
    lines.extend((f"input {role}", digest) for role, digest in digests(inputs).items())
    lines.append(("seed", str(getattr(args, "seed", None))))
    return lines


def write_json(document: Mapping[str, Any], path: str | Path | None = None) -> None:
    text = json.dumps(document, indent=2, sort_keys=False) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


def unit_name(bits: bool) -> str:
    return "bits" if bits else "nats"


def in_unit(nats: float, bits: bool) -> float:
    return nats / NATS_PER_BIT if bits else nats


def write_rows(rows: List[Tuple[str, str]]) -> None:
    width = max((len(key) for key, _ in rows), default=0)
    for key, value in rows:
        sys.stdout.write(f"{key:<{width}}  {value}\n")


@contextlib.contextmanager
def stage(name: str) -> Iterator[None]:
    """Label library errors raised inside the block with the pipeline stage that failed."""
    try:
        yield
    except MaxEntNMLError as err:
        if getattr(err, "stage", None) is None:
            err.stage = name  # type: ignore[attr-defined]
        raise


def read_sample(path: str) -> Sample:
    """Alphabet indices, separated by whitespace or commas."""
    indices = []
    for token, line, column in load_tokens(path):
        try:
            value = int(token)
        except ValueError:
            raise ParseError(
                f"expected an alphabet index, got {token!r}", path=path, line=line, column=column
            ) from None
        if value < 0:
            raise ParseError(f"alphabet indices must be non-negative, got {value}", path=path, line=line, column=column)
        indices.append(value)
    return Sample.of(indices)


def read_class_labels(path: str) -> Tuple[List[int], List[str]]:
    """Class label of every observation; classes are numbered in sorted order, the first being the reference."""
    names = [token for token, _, _ in load_tokens(path)]
    classes = sorted(set(names))
    index = {name: i for i, name in enumerate(classes)}
    return [index[name] for name in names], classes


def alphabet_for(symbols: List[float] | None, levels: int | None, sample: Sample | None) -> Alphabet | None:
    """Explicit symbols, else the integer levels 0..levels-1, else the smallest level alphabet covering the sample."""
    if symbols is not None:
        return Alphabet(symbols=symbols)
    if levels is not None:
        return Alphabet.levels(levels)
    if sample is not None:
        return Alphabet.levels(max(2, max(sample.indices) + 1))
    return None


def float_list(text: str) -> List[float]:
    return [float(part) for part in text.split(",") if part.strip()]
