"""Finite-dimensional Hilbert-space primitives.

States are unit vectors in C^n, observables are Hermitian matrices. The
deviation vector of an observable ``A`` on a state ``psi`` is
``(A - <A>) psi``; its squared norm is the variance of ``A``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidState,
    NotHermitian,
    PreconditionViolated,
    ZeroDeviation,
)

NORM_TOL = 1e-10
HERMITIAN_TOL = 1e-12
ZERO_TOL = 1e-12
ORTHO_TOL = 1e-10
DEPENDENCE_TOL = 1e-8
SEED_TOL = 1e-8


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=np.complex128)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class QuantumState:
    """A normalized pure state."""

    amplitudes: np.ndarray
    label: str = ""

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 1 or amps.size < 2:
            raise InvalidState(f"state must be a vector of length >= 2, got shape {amps.shape}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidState(f"state norm is {norm!r}, expected 1 within {NORM_TOL}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_vector(cls, vec, label: str = "") -> "QuantumState":
        """Normalize ``vec`` and wrap it."""
        v = np.asarray(vec, dtype=np.complex128)
        norm = np.linalg.norm(v)
        if norm <= ZERO_TOL:
            raise InvalidState("cannot normalize a zero vector")
        return cls(v / norm, label)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)


@dataclass(frozen=True, eq=False)
class Observable:
    """A Hermitian matrix."""

    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise NotHermitian(f"observable must be a square matrix, got shape {m.shape}")
        err = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
        if err > HERMITIAN_TOL:
            raise NotHermitian(f"matrix deviates from Hermitian by {err:.3e} (tolerance {HERMITIAN_TOL})")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __add__(self, other: "Observable") -> "Observable":
        return Observable(self.matrix + other.matrix)

    def __sub__(self, other: "Observable") -> "Observable":
        return Observable(self.matrix - other.matrix)

    def shifted(self, c: float) -> "Observable":
        return Observable(self.matrix + c * np.eye(self.dim))


@dataclass(frozen=True, eq=False)
class DeviationVector:
    base: QuantumState
    mean: float
    vector: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "vector", _frozen(self.vector))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    @property
    def variance(self) -> float:
        return float(np.vdot(self.vector, self.vector).real)

    @property
    def is_zero(self) -> bool:
        return self.norm <= ZERO_TOL


class CaseTag(enum.Enum):
    CASE1_DEPENDENT = "CASE1_DEPENDENT"
    CASE1_GENERIC = "CASE1_GENERIC"
    CASE2_ZERO_A = "CASE2_ZERO_A"
    CASE2_ZERO_B = "CASE2_ZERO_B"
    CASE3_ORTHOGONAL = "CASE3_ORTHOGONAL"

    @property
    def is_case2(self) -> bool:
        return self in (CaseTag.CASE2_ZERO_A, CaseTag.CASE2_ZERO_B)


@dataclass(frozen=True)
class UncertaintyCase:
    tag: CaseTag
    dependence_ratio: Optional[complex] = None


def inner(u, v) -> complex:
    """``<u|v>``, conjugate-linear in the first argument."""
    return complex(np.vdot(np.asarray(u), np.asarray(v)))


def _check_dims(obs: Observable, psi: QuantumState) -> None:
    if obs.dim != psi.dim:
        raise DimensionMismatch(f"observable has dim {obs.dim}, state has dim {psi.dim}")


def expectation(obs: Observable, psi: QuantumState) -> float:
    _check_dims(obs, psi)
    val = np.vdot(psi.amplitudes, obs.matrix @ psi.amplitudes)
    if abs(val.imag) > NORM_TOL:
        raise NotHermitian(f"expectation value has imaginary part {val.imag:.3e}")
    return float(val.real)


def deviation_vector(obs: Observable, psi: QuantumState) -> DeviationVector:
    mean = expectation(obs, psi)
    vec = obs.matrix @ psi.amplitudes - mean * psi.amplitudes
    return DeviationVector(psi, mean, vec)


def variance(obs: Observable, psi: QuantumState) -> float:
    return deviation_vector(obs, psi).variance


def normalized_deviation(dev: DeviationVector) -> QuantumState:
    """The unit state ``dev / ||dev||``, orthogonal to the base state."""
    norm = dev.norm
    if norm <= ZERO_TOL:
        raise ZeroDeviation(f"deviation norm {norm:.3e} is below {ZERO_TOL}")
    return QuantumState(dev.vector / norm)


def _same_base(devA: DeviationVector, devB: DeviationVector) -> None:
    a, b = devA.base.amplitudes, devB.base.amplitudes
    if a.shape != b.shape:
        raise DimensionMismatch("deviation vectors live in different dimensions")
    if devA.base is not devB.base and np.max(np.abs(a - b)) > NORM_TOL:
        raise PreconditionViolated("deviation vectors were built on different base states")


def classify_case(devA: DeviationVector, devB: DeviationVector) -> UncertaintyCase:
    """Sort a pair of deviation vectors into the three geometric cases.

    Case 1 is split: ``CASE1_DEPENDENT`` when one vector is a scalar multiple
    of the other (residual test), ``CASE1_GENERIC`` when they merely overlap.
    """
    _same_base(devA, devB)
    if devA.is_zero:
        return UncertaintyCase(CaseTag.CASE2_ZERO_A)
    if devB.is_zero:
        return UncertaintyCase(CaseTag.CASE2_ZERO_B)
    overlap = inner(devA.vector, devB.vector)
    if abs(overlap) <= ORTHO_TOL:
        return UncertaintyCase(CaseTag.CASE3_ORTHOGONAL)
    mu = overlap / devA.variance
    residual = np.linalg.norm(devB.vector - mu * devA.vector) / devB.norm
    if residual <= DEPENDENCE_TOL:
        return UncertaintyCase(CaseTag.CASE1_DEPENDENT, mu)
    return UncertaintyCase(CaseTag.CASE1_GENERIC)


def gram_schmidt_extend(seed_states: Sequence[QuantumState], dim: int) -> list[QuantumState]:
    """Complete an orthonormal set of seeds to a basis of C^dim.

    The seeds are kept verbatim as the leading members. Remaining members are
    obtained by orthogonalizing the standard basis vectors against everything
    collected so far (two passes of modified Gram-Schmidt).
    """
    seeds = [np.asarray(s.amplitudes if isinstance(s, QuantumState) else s, dtype=np.complex128)
             for s in seed_states]
    if len(seeds) > dim:
        raise PreconditionViolated(f"{len(seeds)} seeds cannot fit in dimension {dim}")
    for s in seeds:
        if s.size != dim:
            raise DimensionMismatch(f"seed has dim {s.size}, expected {dim}")
    if seeds:
        S = np.array(seeds)
        gram_err = np.max(np.abs(S.conj() @ S.T - np.eye(len(seeds))))
        if gram_err > SEED_TOL:
            raise PreconditionViolated(f"seeds are not orthonormal (Gram error {gram_err:.3e})")

    basis = list(seeds)
    for k in range(dim):
        if len(basis) == dim:
            break
        v = np.zeros(dim, dtype=np.complex128)
        v[k] = 1.0
        for _ in range(2):
            for b in basis:
                v = v - np.vdot(b, v) * b
        norm = np.linalg.norm(v)
        # a candidate nearly inside the current span is skipped
        if norm > 1e-6:
            basis.append(v / norm)
    out = [s if isinstance(s, QuantumState) else QuantumState(s) for s in seed_states]
    out.extend(QuantumState(v / np.linalg.norm(v)) for v in basis[len(seeds):])
    return out


def random_state(dim: int, rng: np.random.Generator) -> QuantumState:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return QuantumState.from_vector(v)


def random_observable(dim: int, rng: np.random.Generator, scale: float = 1.0) -> Observable:
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return Observable(scale * (m + m.conj().T) / 2)


def random_orthogonal_state(psi: QuantumState, rng: np.random.Generator) -> QuantumState:
    """A random unit state orthogonal to ``psi``."""
    v = rng.normal(size=psi.dim) + 1j * rng.normal(size=psi.dim)
    v = v - np.vdot(psi.amplitudes, v) * psi.amplitudes
    return QuantumState.from_vector(v)
