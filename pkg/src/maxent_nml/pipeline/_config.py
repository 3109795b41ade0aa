from __future__ import annotations

from typing import List

from .._types import CompMethod, QuantizeMethod
from .._models import BaseModel
from .._constants import (
    CLAMP_FLOOR,
    MIN_MC_DRAWS,
    CLAMP_CEILING,
    MIN_ABS_RANGE,
    DEFAULT_LEVELS,
    DEFAULT_M_RANGE,
    MIN_FOLD_CHANGE,
    SMOOTHING_FLOOR,
    DEFAULT_MC_DRAWS,
)
from .._exceptions import InvalidInputError

__all__ = ["PipelineConfig"]


class PipelineConfig(BaseModel):
    levels: int = DEFAULT_LEVELS
    """Number of quantization levels K."""

    m_range: List[int] = list(DEFAULT_M_RANGE)
    """Moment counts swept per gene."""

    include_m0: bool = False
    """Also evaluate the intercept-only model so the no-covariate baseline is reported."""

    intercept: bool = True

    comp_method: CompMethod = "types"

    mc_draws: int = DEFAULT_MC_DRAWS

    seed: int = 0

    quantize_method: QuantizeMethod = "quantile"

    clamp: bool = True

    clamp_floor: float = CLAMP_FLOOR

    clamp_ceiling: float = CLAMP_CEILING

    filter_genes: bool = True

    min_fold_change: float = MIN_FOLD_CHANGE

    min_abs_range: float = MIN_ABS_RANGE

    log_transform: bool = True

    top_g: int = 25

    smoothing_floor: float = SMOOTHING_FLOOR

    workers: int = 1

    def _check(self) -> None:
        if self.levels < 2:
            raise InvalidInputError(f"levels must be >= 2, got {self.levels}")
        if not self.m_range or min(self.m_range) < 0:
            raise InvalidInputError(f"m_range must be a non-empty set of non-negative counts, got {self.m_range}")
        if self.top_g < 1:
            raise InvalidInputError(f"top_g must be >= 1, got {self.top_g}")
        if self.workers < 1:
            raise InvalidInputError(f"workers must be >= 1, got {self.workers}")
        if self.mc_draws < MIN_MC_DRAWS:
            raise InvalidInputError(f"mc_draws must be >= {MIN_MC_DRAWS}, got {self.mc_draws}")
        if not 0.0 < self.smoothing_floor < 1.0 / self.levels:
            raise InvalidInputError(f"smoothing_floor must lie in (0, 1/levels), got {self.smoothing_floor}")
        if self.clamp and not 0.0 < self.clamp_floor < self.clamp_ceiling:
            raise InvalidInputError("The clamp range must satisfy 0 < floor < ceiling")

    @property
    def moments(self) -> List[int]:
        """The swept moment counts, ascending, with 0 added when requested."""
        values = set(self.m_range)
        if self.include_m0:
            values.add(0)
        return sorted(values)
