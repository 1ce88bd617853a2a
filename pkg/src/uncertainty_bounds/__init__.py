"""Variance-based quantum uncertainty bounds with auxiliary states."""

from .bounds import BoundReport, RelationId, ShiftedBypassResult
from .errors import (
    DimensionMismatch,
    EvennessViolated,
    InvalidState,
    NotHermitian,
    PreconditionViolated,
    UncertaintyError,
    ZeroDeviation,
)
from .hilbert import (
    CaseTag,
    DeviationVector,
    Observable,
    QuantumState,
    UncertaintyCase,
    classify_case,
    deviation_vector,
    expectation,
    gram_schmidt_extend,
    normalized_deviation,
)

__version__ = "0.1.0"
