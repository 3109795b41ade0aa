from __future__ import annotations

from typing_extensions import Literal, TypeAlias

import numpy as np
import numpy.typing as npt

# user-facing COMP method names, as accepted by the CLI and the pipeline config
CompMethod = Literal["exact", "types", "mc"]

# method tags recorded on a CodelengthReport
MethodTag = Literal["exact-enum", "type-class", "grouped", "monte-carlo", "injected"]

Criterion = Literal["nml", "minimax"]

QuantizeMethod = Literal["quantile", "width"]

SplitTag = Literal["train", "test"]

FeatureKind = Literal["moment", "indicator", "custom"]

FloatArray: TypeAlias = "npt.NDArray[np.float64]"
IntArray: TypeAlias = "npt.NDArray[np.int64]"
BoolArray: TypeAlias = "npt.NDArray[np.bool_]"
