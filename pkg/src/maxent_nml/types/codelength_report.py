from __future__ import annotations

from typing import Optional

from .._types import MethodTag
from .._models import BaseModel
from .._constants import NATS_PER_BIT
from .._exceptions import InvalidInputError

__all__ = ["CodelengthReport"]


class CodelengthReport(BaseModel):
    err_nats: float
    """Codelength of the data under the best-fitting model member (n times the maximum entropy)."""

    comp_nats: float
    """Parametric complexity: log of the normaliser of the maximised likelihood."""

    nml_nats: float
    """Stochastic complexity, err_nats + comp_nats."""

    method: MethodTag

    n: int

    num_features: int

    mc_stderr_nats: Optional[float] = None

    def _check(self) -> None:
        if abs(self.nml_nats - (self.err_nats + self.comp_nats)) > 1e-12 * max(1.0, abs(self.nml_nats)):
            raise InvalidInputError("nml_nats must equal err_nats + comp_nats")
        if self.err_nats < -1e-12:
            raise InvalidInputError(f"err_nats must be non-negative, got {self.err_nats}")
        if self.method in ("exact-enum", "type-class", "grouped") and self.comp_nats < -1e-9:
            raise InvalidInputError(f"comp_nats must be non-negative, got {self.comp_nats}")

    @classmethod
    def combine(
        cls,
        err_nats: float,
        comp_nats: float,
        *,
        method: MethodTag,
        n: int,
        num_features: int,
        mc_stderr_nats: float | None = None,
    ) -> CodelengthReport:
        return cls(
            err_nats=err_nats,
            comp_nats=comp_nats,
            nml_nats=err_nats + comp_nats,
            method=method,
            n=n,
            num_features=num_features,
            mc_stderr_nats=mc_stderr_nats,
        )

    def in_bits(self) -> dict[str, float | None]:
        return {
            "err_bits": self.err_nats / NATS_PER_BIT,
            "comp_bits": self.comp_nats / NATS_PER_BIT,
            "nml_bits": self.nml_nats / NATS_PER_BIT,
            "mc_stderr_bits": None if self.mc_stderr_nats is None else self.mc_stderr_nats / NATS_PER_BIT,
        }
