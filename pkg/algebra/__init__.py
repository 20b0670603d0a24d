"""Computer algebra for plane-curve arrangements."""

from .errors import (
    ArrangementError,
    ArrangementFileError,
    HypothesisViolation,
    InconsistencyError,
    PolynomialSyntaxError,
)
from .groebner import (
    EngineOptions,
    FreeResolution,
    GradedIdeal,
    GradedSubmodule,
    HilbertSeries,
    QuotientModule,
    free_resolution,
    groebner_basis,
    hilbert_series,
    syzygies,
)
from .logtangent import d0_module, freeness, predict_addition
from .polycore import format_polynomial, make_ring, parse_polynomial
from .singcurve import Arrangement, singularity_profile

__all__ = [
    "ArrangementError",
    "ArrangementFileError",
    "HypothesisViolation",
    "InconsistencyError",
    "PolynomialSyntaxError",
    "EngineOptions",
    "FreeResolution",
    "GradedIdeal",
    "GradedSubmodule",
    "HilbertSeries",
    "QuotientModule",
    "free_resolution",
    "groebner_basis",
    "hilbert_series",
    "syzygies",
    "d0_module",
    "freeness",
    "predict_addition",
    "format_polynomial",
    "make_ring",
    "parse_polynomial",
    "Arrangement",
    "singularity_profile",
]
