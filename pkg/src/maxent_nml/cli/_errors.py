from __future__ import annotations

import sys
from typing_extensions import Literal

import pydantic

from ._utils import Colors
from .._exceptions import MaxEntNMLError


class CLIError(MaxEntNMLError):
    exit_code: Literal[1] = 1  # pyright: ignore[reportIncompatibleVariableOverride]


def display_error(err: Exception | pydantic.ValidationError, *, stage: str | None = None) -> None:
    where = f"[{stage}] " if stage else ""
    sys.stderr.write("{}{}Error:{} {}\n".format(where, Colors.FAIL, Colors.ENDC, err))
