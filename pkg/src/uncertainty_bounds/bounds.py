"""Evaluators for variance-based uncertainty inequalities.

Every evaluator returns a :class:`BoundReport` holding both sides of one
inequality. Auxiliary states are plain :class:`QuantumState` objects; their
``label`` is recorded in the report.

Conventions: ``a_k = <Psi_A|aux_k>`` and ``b_k = <Psi_B|aux_k>`` where
``Psi_X = (X - <X>) psi``, and ``<u|v>`` is conjugate-linear in ``u``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, PreconditionViolated
from .hilbert import (
    DeviationVector,
    Observable,
    QuantumState,
    deviation_vector,
    expectation,
    inner,
)

VALID_TOL = 1e-10
SATURATION_TOL = 1e-8
AUX_ORTHO_TOL = 1e-8
CASE3_TOL = 1e-8
BYPASS_TOL = 1e-10


class RelationId(str, enum.Enum):
    EQ2 = "EQ2"
    EQ3 = "EQ3"
    EQ4A = "EQ4A"
    EQ4B = "EQ4B"
    EQ5A = "EQ5A"
    EQ5B = "EQ5B"
    EQ13 = "EQ13"
    EQ14 = "EQ14"
    EQ15 = "EQ15"
    EQ16 = "EQ16"
    EQ17 = "EQ17"
    MULTI = "MULTI"
    CHENFEI = "CHENFEI"


@dataclass(frozen=True)
class BoundReport:
    relation_id: RelationId
    lhs: float
    rhs: float
    aux_ids: tuple[str, ...] = ()
    lam: Optional[float] = None
    sign_choice: Optional[int] = None
    canonical: bool = True
    extras: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.rhs <= self.lhs + VALID_TOL

    @property
    def saturated(self) -> bool:
        return abs(self.lhs - self.rhs) <= SATURATION_TOL

    @property
    def gap(self) -> float:
        return self.lhs - self.rhs

    def to_dict(self) -> dict:
        return {
            "relation_id": self.relation_id.value,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "aux_ids": list(self.aux_ids),
            "lambda": self.lam,
            "sign_choice": self.sign_choice,
            "canonical": self.canonical,
            "valid": self.valid,
            "saturated": self.saturated,
            **{k: v for k, v in self.extras.items()},
        }


@dataclass(frozen=True, eq=False)
class ShiftedBypassResult:
    shifted_obs: Observable
    eigenvalue: float
    delta_a: float
    delta_shifted: float
    delta_equal: bool
    commutator_preserved: bool


def _devs(A: Observable, B: Observable, psi: QuantumState):
    if A.dim != B.dim:
        raise DimensionMismatch(f"observables have dims {A.dim} and {B.dim}")
    return deviation_vector(A, psi), deviation_vector(B, psi)


def _aux(aux: QuantumState, psi: QuantumState) -> np.ndarray:
    if aux.dim != psi.dim:
        raise DimensionMismatch(f"auxiliary state has dim {aux.dim}, state has dim {psi.dim}")
    return aux.amplitudes


def _require_orthogonal(aux: QuantumState, psi: QuantumState, tol: float, name: str = "aux",
                        allow: bool = False) -> float:
    """Overlap of ``aux`` with the state; raises unless ``allow`` or it is below ``tol``.

    A component along the state never inflates these right sides (deviation
    vectors are orthogonal to the state), so ``allow=True`` stays sound.
    """
    ov = abs(inner(psi.amplitudes, _aux(aux, psi)))
    if ov > tol and not allow:
        raise PreconditionViolated(f"{name} overlaps the state by {ov:.3e} (must be orthogonal within {tol})")
    return ov


def _label(aux: QuantumState, default: str) -> str:
    return aux.label or default


def i_commutator(A: Observable, B: Observable, psi: QuantumState) -> float:
    """The real number ``i<[A, B]>``."""
    C = A.matrix @ B.matrix - B.matrix @ A.matrix
    return float((1j * np.vdot(psi.amplitudes, C @ psi.amplitudes)).real)


def robertson_product(A: Observable, B: Observable, psi: QuantumState) -> BoundReport:
    """Cauchy-Schwarz product bound ``dA dB >= |<Psi_A|Psi_B>|``.

    ``extras`` carries the commutator and anticommutator parts of the
    squared right side; they sum to ``rhs**2``.
    """
    dA, dB = _devs(A, B, psi)
    overlap = inner(dA.vector, dB.vector)
    p = psi.amplitudes
    comm = np.vdot(p, (A.matrix @ B.matrix - B.matrix @ A.matrix) @ p)
    anti = np.vdot(p, (A.matrix @ B.matrix + B.matrix @ A.matrix) @ p).real
    comm_term = abs(0.5 * comm) ** 2
    anti_term = (0.5 * anti - dA.mean * dB.mean) ** 2
    return BoundReport(
        RelationId.EQ2,
        lhs=dA.norm * dB.norm,
        rhs=abs(overlap),
        extras={"commutator_term": comm_term, "anticommutator_term": anti_term},
    )


def robertson_schrodinger(A: Observable, B: Observable, psi: QuantumState) -> BoundReport:
    """Squared form: ``dA^2 dB^2 >= |<[A,B]>/2|^2 + (<{A,B}>/2 - <A><B>)^2``."""
    rep = robertson_product(A, B, psi)
    return BoundReport(
        RelationId.EQ3,
        lhs=rep.lhs**2,
        rhs=rep.extras["commutator_term"] + rep.extras["anticommutator_term"],
        extras=dict(rep.extras),
    )


def sum_bound_4a(A: Observable, B: Observable, psi: QuantumState, aux: QuantumState,
                 tol: float = AUX_ORTHO_TOL, allow_nonorthogonal: bool = False) -> BoundReport:
    """``dA^2 + dB^2 >= s i<[A,B]> + |a + s i b|^2``, maximized over ``s = +-1``."""
    dA, dB = _devs(A, B, psi)
    ov = _require_orthogonal(aux, psi, tol, allow=allow_nonorthogonal)
    v = _aux(aux, psi)
    a, b = inner(dA.vector, v), inner(dB.vector, v)
    ic = i_commutator(A, B, psi)
    best, sign = max((s * ic + abs(a + s * 1j * b) ** 2, s) for s in (1, -1))
    return BoundReport(
        RelationId.EQ4A,
        lhs=dA.variance + dB.variance,
        rhs=best,
        aux_ids=(_label(aux, "aux"),),
        sign_choice=sign,
        extras={"aux_state_overlap": ov},
    )


def sum_bound_4b(A: Observable, B: Observable, psi: QuantumState,
                 aux_override: Optional[QuantumState] = None,
                 tol: float = AUX_ORTHO_TOL, allow_nonorthogonal: bool = False) -> BoundReport:
    """``dA^2 + dB^2 >= |<Psi_A + Psi_B|aux>|^2 / 2``.

    Without an override the auxiliary state is ``(Psi_A + Psi_B)`` normalized,
    which makes the right side ``||Psi_A + Psi_B||^2 / 2``.
    """
    dA, dB = _devs(A, B, psi)
    total = dA.vector + dB.vector
    if aux_override is None:
        norm = np.linalg.norm(total)
        if norm <= 1e-12:
            raise PreconditionViolated("Psi_A + Psi_B vanishes; the canonical auxiliary state is undefined")
        v, aux_id, canonical = total / norm, "canonical(A+B)", True
    else:
        _require_orthogonal(aux_override, psi, tol, allow=allow_nonorthogonal)
        v, aux_id, canonical = _aux(aux_override, psi), _label(aux_override, "aux"), False
    return BoundReport(
        RelationId.EQ4B,
        lhs=dA.variance + dB.variance,
        rhs=0.5 * abs(inner(total, v)) ** 2,
        aux_ids=(aux_id,),
        canonical=canonical,
    )


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not lam > 0 or not math.isfinite(lam):
        raise PreconditionViolated(f"lambda must be a positive finite real, got {lam!r}")
    return lam


def _weighted_lhs(dA: DeviationVector, dB: DeviationVector, lam: float) -> float:
    return (1 + lam) * dA.variance + (1 + 1 / lam) * dB.variance


def weighted_sum_5a(A: Observable, B: Observable, psi: QuantumState,
                    aux1: QuantumState, aux2: QuantumState, lam: float = 1.0,
                    tol: float = AUX_ORTHO_TOL, allow_nonorthogonal: bool = False) -> BoundReport:
    """Weighted two-state sum bound.

    ``(1+lam) dA^2 + (1+1/lam) dB^2 >= 2 s i<[A,B]> + |a1 + s i b1|^2
    + |lam a2 + s i b2|^2 / lam`` for either ``s``; the larger is returned.
    """
    lam = _check_lambda(lam)
    dA, dB = _devs(A, B, psi)
    _require_orthogonal(aux1, psi, tol, "aux1", allow_nonorthogonal)
    _require_orthogonal(aux2, psi, tol, "aux2", allow_nonorthogonal)
    v1, v2 = _aux(aux1, psi), _aux(aux2, psi)
    a1, b1 = inner(dA.vector, v1), inner(dB.vector, v1)
    a2, b2 = inner(dA.vector, v2), inner(dB.vector, v2)
    ic = i_commutator(A, B, psi)
    best, sign = max(
        (2 * s * ic + abs(a1 + s * 1j * b1) ** 2 + abs(lam * a2 + s * 1j * b2) ** 2 / lam, s)
        for s in (1, -1)
    )
    return BoundReport(
        RelationId.EQ5A,
        lhs=_weighted_lhs(dA, dB, lam),
        rhs=best,
        aux_ids=(_label(aux1, "aux1"), _label(aux2, "aux2")),
        lam=lam,
        sign_choice=sign,
    )


def weighted_sum_5b(A: Observable, B: Observable, psi: QuantumState,
                    aux_first: Optional[QuantumState], aux_second: QuantumState,
                    lam: float = 1.0, tol: float = AUX_ORTHO_TOL,
                    allow_nonorthogonal: bool = False) -> BoundReport:
    """``... >= |<Psi_A + Psi_B|aux_first>|^2 + |lam a2 - b2|^2 / lam``.

    ``aux_first=None`` uses the normalized ``Psi_A + Psi_B``.
    """
    lam = _check_lambda(lam)
    dA, dB = _devs(A, B, psi)
    total = dA.vector + dB.vector
    if aux_first is None:
        norm = np.linalg.norm(total)
        if norm <= 1e-12:
            raise PreconditionViolated("Psi_A + Psi_B vanishes; the canonical auxiliary state is undefined")
        v1, first_id, canonical = total / norm, "canonical(A+B)", True
    else:
        _require_orthogonal(aux_first, psi, tol, "aux_first", allow_nonorthogonal)
        v1, first_id, canonical = _aux(aux_first, psi), _label(aux_first, "aux1"), False
    _require_orthogonal(aux_second, psi, tol, "aux_second", allow_nonorthogonal)
    v2 = _aux(aux_second, psi)
    first = abs(inner(total, v1)) ** 2
    second = abs(lam * inner(dA.vector, v2) - inner(dB.vector, v2)) ** 2 / lam
    return BoundReport(
        RelationId.EQ5B,
        lhs=_weighted_lhs(dA, dB, lam),
        rhs=first + second,
        aux_ids=(first_id, _label(aux_second, "aux2")),
        lam=lam,
        canonical=canonical,
        extras={"first_term": first, "second_term": second},
    )


def product_one_aux(A: Observable, B: Observable, psi: QuantumState, auxN: QuantumState) -> BoundReport:
    dA, dB = _devs(A, B, psi)
    v = _aux(auxN, psi)
    return BoundReport(
        RelationId.EQ13,
        lhs=dA.norm * dB.norm,
        rhs=abs(inner(dA.vector, v)) * abs(inner(dB.vector, v)),
        aux_ids=(_label(auxN, "N"),),
    )


def sum_one_aux(A: Observable, B: Observable, psi: QuantumState, auxN: QuantumState) -> BoundReport:
    dA, dB = _devs(A, B, psi)
    v = _aux(auxN, psi)
    return BoundReport(
        RelationId.EQ14,
        lhs=dA.norm + dB.norm,
        rhs=abs(inner(dA.vector, v)) + abs(inner(dB.vector, v)),
        aux_ids=(_label(auxN, "N"),),
    )


def product_two_aux(A: Observable, B: Observable, psi: QuantumState,
                    aux1: QuantumState, aux2: QuantumState) -> BoundReport:
    dA, dB = _devs(A, B, psi)
    return BoundReport(
        RelationId.EQ15,
        lhs=dA.norm * dB.norm,
        rhs=abs(inner(dA.vector, _aux(aux1, psi))) * abs(inner(dB.vector, _aux(aux2, psi))),
        aux_ids=(_label(aux1, "N1"), _label(aux2, "N2")),
    )


def sum_two_aux(A: Observable, B: Observable, psi: QuantumState,
                aux1: QuantumState, aux2: QuantumState) -> BoundReport:
    dA, dB = _devs(A, B, psi)
    return BoundReport(
        RelationId.EQ16,
        lhs=dA.norm + dB.norm,
        rhs=abs(inner(dA.vector, _aux(aux1, psi))) + abs(inner(dB.vector, _aux(aux2, psi))),
        aux_ids=(_label(aux1, "N1"), _label(aux2, "N2")),
    )


def _require_mutually_orthogonal(devs: Sequence[DeviationVector], tol: float) -> None:
    for i in range(len(devs)):
        for j in range(i + 1, len(devs)):
            ov = abs(inner(devs[i].vector, devs[j].vector))
            if ov > tol:
                raise PreconditionViolated(
                    f"deviation vectors {i} and {j} overlap by {ov:.3e}; "
                    f"the strengthened product bound needs them orthogonal within {tol}"
                )


def strengthened_product(A: Observable, B: Observable, psi: QuantumState, auxN: QuantumState,
                         tol: float = CASE3_TOL) -> BoundReport:
    """``dA dB >= 2 |a| |b|``, admissible only for orthogonal deviation vectors."""
    dA, dB = _devs(A, B, psi)
    _require_mutually_orthogonal([dA, dB], tol)
    v = _aux(auxN, psi)
    return BoundReport(
        RelationId.EQ17,
        lhs=dA.norm * dB.norm,
        rhs=2 * abs(inner(dA.vector, v)) * abs(inner(dB.vector, v)),
        aux_ids=(_label(auxN, "N"),),
    )


def multi_observable_product(obs_list: Sequence[Observable], psi: QuantumState, auxN: QuantumState,
                             tol: float = CASE3_TOL) -> BoundReport:
    """``prod dX_i >= n^(n/2) prod |<Psi_Xi|aux>|`` for n mutually orthogonal deviations."""
    n = len(obs_list)
    if n < 2:
        raise PreconditionViolated("need at least two observables")
    devs = [deviation_vector(X, psi) for X in obs_list]
    for k, d in enumerate(devs):
        if d.is_zero:
            raise PreconditionViolated(f"deviation vector {k} vanishes")
    _require_mutually_orthogonal(devs, tol)
    v = _aux(auxN, psi)
    overlaps = [abs(inner(d.vector, v)) for d in devs]
    return BoundReport(
        RelationId.MULTI,
        lhs=float(np.prod([d.norm for d in devs])),
        rhs=float(n ** (n / 2) * np.prod(overlaps)),
        aux_ids=(_label(auxN, "N"),),
        extras={"n": n},
    )


def chen_fei_sum(A: Observable, B: Observable, psi: QuantumState) -> BoundReport:
    """``dA + dB >= max(d(A+B), d(A-B))``; needs no auxiliary state."""
    dA, dB = _devs(A, B, psi)
    plus = np.linalg.norm(dA.vector + dB.vector)
    minus = np.linalg.norm(dA.vector - dB.vector)
    return BoundReport(
        RelationId.CHENFEI,
        lhs=dA.norm + dB.norm,
        rhs=float(max(plus, minus)),
        extras={"delta_sum": float(plus), "delta_difference": float(minus)},
    )


def shifted_operator_bypass(A: Observable, B: Observable, psi: QuantumState,
                            tol: float = BYPASS_TOL) -> ShiftedBypassResult:
    """Replace an observable with zero spread by ``B - A``.

    If ``B psi = beta psi`` then ``(B - A)`` has deviation ``-Psi_A``, so its
    spread equals that of ``A`` while the commutator with ``A`` is unchanged.
    """
    dA, dB = _devs(A, B, psi)
    if dB.norm > tol:
        raise PreconditionViolated(f"B has spread {dB.norm:.3e}; the bypass needs an eigenstate of B")
    Bbar = B - A
    dBbar = deviation_vector(Bbar, psi)
    c_old = A.matrix @ B.matrix - B.matrix @ A.matrix
    c_new = A.matrix @ Bbar.matrix - Bbar.matrix @ A.matrix
    return ShiftedBypassResult(
        shifted_obs=Bbar,
        eigenvalue=expectation(B, psi),
        delta_a=dA.norm,
        delta_shifted=dBbar.norm,
        delta_equal=abs(dBbar.norm - dA.norm) <= tol,
        commutator_preserved=bool(np.max(np.abs(c_new - c_old)) <= tol),
    )
