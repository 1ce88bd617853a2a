"""Auxiliary states expanded over a basis adapted to the deviation vectors.

The basis starts with the state itself followed by the normalized deviation
vectors, and is completed by Gram-Schmidt. In that basis the overlap product
of an auxiliary state depends only on the moduli of its coefficients, which
makes the optimum available in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import PreconditionViolated, ZeroDeviation
from .hilbert import (
    DeviationVector,
    QuantumState,
    gram_schmidt_extend,
    inner,
    normalized_deviation,
)

ORTHO_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class AuxParametrization:
    basis: tuple[QuantumState, ...]
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=np.complex128)
        if c.shape != (len(self.basis),):
            raise ValueError(f"expected {len(self.basis)} coefficients, got shape {c.shape}")
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "coefficients", c)

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.coefficients)


def adapted_basis(devA: DeviationVector, devB: DeviationVector) -> list[QuantumState]:
    """Orthonormal basis whose first three members are psi, Psi_A/dA, Psi_B/dB."""
    _require_pair(devA, devB)
    psi = devA.base
    return gram_schmidt_extend([psi, normalized_deviation(devA), normalized_deviation(devB)], psi.dim)


def aux_from_coefficients(param: AuxParametrization) -> QuantumState:
    r2 = float(np.sum(param.moduli**2))
    if r2 == 0.0:
        raise ValueError("all coefficients are zero")
    vec = sum(c * b.amplitudes for c, b in zip(param.coefficients, param.basis))
    return QuantumState(vec / np.sqrt(r2))


def _check_adapted(param: AuxParametrization, devA: DeviationVector, devB: DeviationVector) -> None:
    if len(param.basis) < 3:
        raise PreconditionViolated("basis must contain psi and both normalized deviations")
    expected = (devA.base.amplitudes, normalized_deviation(devA).amplitudes,
                normalized_deviation(devB).amplitudes)
    for k, (b, e) in enumerate(zip(param.basis, expected)):
        if np.max(np.abs(b.amplitudes - e)) > ORTHO_TOL:
            raise PreconditionViolated(f"basis member {k} does not match its seed")


def overlap_product_objective(param: AuxParametrization, devA: DeviationVector,
                              devB: DeviationVector) -> float:
    """``|<Psi_A|aux>| |<Psi_B|aux>|`` for the parametrized auxiliary state."""
    _check_adapted(param, devA, devB)
    v = aux_from_coefficients(param).amplitudes
    return abs(inner(devA.vector, v)) * abs(inner(devB.vector, v))


def closed_form_objective(moduli: Sequence[float], devA: DeviationVector, devB: DeviationVector) -> float:
    """``r2 r3 / sum(r^2) * dA dB`` (moduli indexed from zero)."""
    r = np.asarray(moduli, dtype=float)
    return float(r[1] * r[2] / np.sum(r**2) * devA.norm * devB.norm)


def _require_pair(devA: DeviationVector, devB: DeviationVector) -> None:
    _require_family([devA, devB])


def _require_family(devs: Sequence[DeviationVector]) -> None:
    for k, d in enumerate(devs):
        if d.is_zero:
            raise ZeroDeviation(f"deviation vector {k} vanishes")
    for i in range(len(devs)):
        for j in range(i + 1, len(devs)):
            ov = abs(inner(devs[i].vector, devs[j].vector))
            if ov > ORTHO_TOL:
                raise PreconditionViolated(f"deviation vectors {i} and {j} are not orthogonal (overlap {ov:.3e})")


def optimal_aux_multi(devs: Sequence[DeviationVector]) -> QuantumState:
    """Equal-weight combination of the normalized deviations.

    For n mutually orthogonal deviations this maximizes the product of
    overlaps, each becoming ``dX_i / sqrt(n)``.
    """
    if len(devs) < 2:
        raise PreconditionViolated("need at least two deviation vectors")
    _require_family(devs)
    vec = sum(normalized_deviation(d).amplitudes for d in devs)
    return QuantumState(vec / np.sqrt(len(devs)), label="optimal")


def optimal_aux_pair(devA: DeviationVector, devB: DeviationVector) -> QuantumState:
    return optimal_aux_multi([devA, devB])
