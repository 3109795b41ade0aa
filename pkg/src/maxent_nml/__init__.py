from __future__ import annotations

from . import types
from .types import (
    Sample,
    Alphabet,
    ClassSet,
    Candidate,
    TypeClass,
    CandidateSet,
    FeatureTable,
    MomentVector,
    SelectionResult,
    CodelengthReport,
    CondFeatureTable,
    ConditionalModel,
    MaxEntDistribution,
)
from .maxent import (
    entropy,
    fit_maxent,
    dual_gradient,
    dual_objective,
    log_likelihood,
    empirical_moments,
    build_moment_features,
    build_indicator_features,
)
from ._version import __title__, __version__
from .selection import select_by_nml, select_by_minimax
from .codelength import (
    comp_by_types,
    err_codelength,
    nml_codelength,
    comp_exact_enum,
    comp_monte_carlo,
    enumerate_type_classes,
)
from ._exceptions import (
    ParseError,
    MaxEntNMLError,
    SelectionError,
    ConvergenceError,
    EmptyResultError,
    CapExceededError,
    FeatureRangeError,
    InvalidInputError,
    LabelMismatchError,
    InfeasibleConstraintsError,
)
from .discriminative import (
    Complexity,
    cond_nml,
    cond_comp,
    cond_comp_exact,
    fit_conditional,
    cond_comp_grouped,
    cond_err_codelength,
    conditional_gradient,
    cond_comp_monte_carlo,
    conditional_objective,
    build_cond_moment_features,
    conditional_log_likelihood,
)
from ._utils._logs import setup_logging as _setup_logging

__all__ = [
    "types",
    "__version__",
    "__title__",
    "Sample",
    "Alphabet",
    "ClassSet",
    "Candidate",
    "CandidateSet",
    "TypeClass",
    "FeatureTable",
    "CondFeatureTable",
    "MomentVector",
    "MaxEntDistribution",
    "ConditionalModel",
    "CodelengthReport",
    "SelectionResult",
    "MaxEntNMLError",
    "InvalidInputError",
    "FeatureRangeError",
    "InfeasibleConstraintsError",
    "ConvergenceError",
    "CapExceededError",
    "ParseError",
    "LabelMismatchError",
    "EmptyResultError",
    "SelectionError",
    "build_moment_features",
    "build_indicator_features",
    "empirical_moments",
    "fit_maxent",
    "entropy",
    "log_likelihood",
    "dual_objective",
    "dual_gradient",
    "err_codelength",
    "enumerate_type_classes",
    "comp_exact_enum",
    "comp_by_types",
    "comp_monte_carlo",
    "nml_codelength",
    "Complexity",
    "build_cond_moment_features",
    "fit_conditional",
    "conditional_log_likelihood",
    "conditional_objective",
    "conditional_gradient",
    "cond_err_codelength",
    "cond_comp_exact",
    "cond_comp_grouped",
    "cond_comp_monte_carlo",
    "cond_comp",
    "cond_nml",
    "select_by_nml",
    "select_by_minimax",
]

from .version import VERSION as VERSION

_setup_logging()

# Update the __module__ attribute for exported exceptions so that
# error messages point to this module instead of the module
# it was originally defined in, e.g.
# maxent_nml._exceptions.ParseError -> maxent_nml.ParseError
__locals = locals()
for __name in __all__:
    if __name.endswith("Error"):
        try:
            setattr(__locals[__name], "__module__", "maxent_nml")
        except (TypeError, AttributeError):
            pass
