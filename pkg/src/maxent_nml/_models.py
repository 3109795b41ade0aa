from __future__ import annotations

from typing import Any
from typing_extensions import ClassVar, override

import pydantic

from ._compat import PYDANTIC_V2, ConfigDict

__all__ = ["BaseModel"]


class BaseModel(pydantic.BaseModel):
    """Immutable value type shared by every domain model.

    Subclasses enforce their invariants in `_check()`, which runs after pydantic
    has validated the field types.
    """

    if PYDANTIC_V2:
        model_config: ClassVar[ConfigDict] = ConfigDict(
            frozen=True,
            extra="forbid",
            arbitrary_types_allowed=True,
            protected_namespaces=(),
        )
    else:

        class Config(pydantic.BaseConfig):  # pyright: ignore[reportDeprecated]
            allow_mutation: bool = False
            extra: Any = pydantic.Extra.forbid  # type: ignore
            arbitrary_types_allowed: bool = True

    def __init__(self, **data: Any) -> None:
        super().__init__(**data)
        self._check()

    def _check(self) -> None:
        return None

    @override
    def __str__(self) -> str:
        # mypy complains about an invalid self arg
        return f'{self.__repr_name__()}({self.__repr_str__(", ")})'  # type: ignore[misc]
