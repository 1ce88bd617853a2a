"""Angular-momentum matrices and the spin-1 / spin-1/2 worked examples."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import bounds
from .bounds import BoundReport
from .hilbert import (
    CaseTag,
    Observable,
    QuantumState,
    classify_case,
    deviation_vector,
    inner,
)

SQRT2, SQRT3, SQRT6 = math.sqrt(2), math.sqrt(3), math.sqrt(6)


@dataclass(frozen=True, eq=False)
class SpinSystem:
    j: Fraction
    Jx: Observable
    Jy: Observable
    Jz: Observable
    Jsq: Observable
    Jplus: np.ndarray
    Jminus: np.ndarray

    @property
    def dim(self) -> int:
        return int(2 * self.j + 1)

    def basis_state(self, mu) -> QuantumState:
        """``|j, mu>`` in the ordering mu = j, j-1, ..., -j."""
        idx = self.j - Fraction(mu)
        if idx.denominator != 1 or not 0 <= idx < self.dim:
            raise ValueError(f"mu={mu} is not a projection for j={self.j}")
        v = np.zeros(self.dim, dtype=np.complex128)
        v[int(idx)] = 1.0
        return QuantumState(v, label=f"|{self.j},{mu}>")


def _as_spin(j) -> Fraction:
    try:
        jf = Fraction(j).limit_denominator(2) if isinstance(j, float) else Fraction(j)
    except (TypeError, ValueError):
        raise ValueError(f"invalid spin {j!r}") from None
    if isinstance(j, float) and abs(float(jf) - j) > 1e-12:
        raise ValueError(f"spin must be a positive multiple of 1/2, got {j!r}")
    if jf <= 0 or (2 * jf).denominator != 1:
        raise ValueError(f"spin must be a positive multiple of 1/2, got {j!r}")
    return jf


def spin_matrices(j) -> SpinSystem:
    """Spin-j matrices (hbar = 1) from the ladder-operator matrix elements."""
    jf = _as_spin(j)
    jv = float(jf)
    mu = jv - np.arange(int(2 * jf) + 1)
    # <mu+1|J+|mu> = sqrt((j - mu)(j + mu + 1)); raising moves one row up
    jp = np.diag(np.sqrt((jv - mu[1:]) * (jv + mu[1:] + 1)), k=1).astype(np.complex128)
    jm = jp.conj().T
    jx = (jp + jm) / 2
    jy = (jp - jm) / 2j
    jz = np.diag(mu).astype(np.complex128)
    jsq = jx @ jx + jy @ jy + jz @ jz
    return SpinSystem(jf, Observable(jx, "Jx"), Observable(jy, "Jy"), Observable(jz, "Jz"),
                      Observable(jsq, "J^2"), jp, jm)


def pauli() -> tuple[Observable, Observable, Observable]:
    s = spin_matrices(Fraction(1, 2))
    return (Observable(2 * s.Jx.matrix, "sx"), Observable(2 * s.Jy.matrix, "sy"),
            Observable(2 * s.Jz.matrix, "sz"))


def qutrit_state(phi: float) -> QuantumState:
    """``sin(phi)|1,1> + cos(phi)|1,-1>``."""
    return QuantumState(np.array([math.sin(phi), 0.0, math.cos(phi)]), label=f"qutrit({phi:g})")


def qubit_state(phi: float) -> QuantumState:
    return QuantumState(np.array([math.sin(phi), math.cos(phi)]), label=f"qubit({phi:g})")


@dataclass(frozen=True)
class SweepRow:
    phi: float
    mean_a: float
    mean_b: float
    var_a: float
    var_b: float
    eq2_lhs: float
    eq2_rhs: float
    eq2_saturated: bool
    eq4a_rhs: float
    eq4b_rhs: float
    case: CaseTag
    bypass_delta: Optional[float] = None

    @property
    def var_sum(self) -> float:
        return self.var_a + self.var_b

    def to_dict(self) -> dict:
        return {
            "phi": self.phi,
            "mean_a": self.mean_a,
            "mean_b": self.mean_b,
            "var_a": self.var_a,
            "var_b": self.var_b,
            "var_sum": self.var_sum,
            "eq2_lhs": self.eq2_lhs,
            "eq2_rhs": self.eq2_rhs,
            "eq2_saturated": self.eq2_saturated,
            "eq4a_rhs": self.eq4a_rhs,
            "eq4b_rhs": self.eq4b_rhs,
            "case": self.case.value,
            "bypass_delta": self.bypass_delta,
        }


def _system(kind: str):
    if kind == "qutrit":
        s = spin_matrices(1)
        return s.Jx, s.Jy, qutrit_state
    if kind == "qubit":
        sx, sy, _ = pauli()
        return sx, sy, qubit_state
    raise ValueError(f"unknown system {kind!r}; expected 'qutrit' or 'qubit'")


def sweep_row(kind: str, phi: float) -> SweepRow:
    A, B, make = _system(kind)
    psi = make(phi)
    dA, dB = deviation_vector(A, psi), deviation_vector(B, psi)
    case = classify_case(dA, dB).tag
    eq2 = bounds.robertson_product(A, B, psi)
    # Psi_A and Psi_B are never both zero for these families
    aux = QuantumState.from_vector(dA.vector + dB.vector, label="canonical(A+B)")
    eq4a = bounds.sum_bound_4a(A, B, psi, aux)
    eq4b = bounds.sum_bound_4b(A, B, psi)
    bypass = None
    if case is CaseTag.CASE2_ZERO_B:
        bypass = bounds.shifted_operator_bypass(A, B, psi).delta_shifted
    elif case is CaseTag.CASE2_ZERO_A:
        bypass = bounds.shifted_operator_bypass(B, A, psi).delta_shifted
    return SweepRow(
        phi=phi,
        mean_a=dA.mean,
        mean_b=dB.mean,
        var_a=dA.variance,
        var_b=dB.variance,
        eq2_lhs=eq2.lhs,
        eq2_rhs=eq2.rhs,
        eq2_saturated=eq2.saturated,
        eq4a_rhs=eq4a.rhs,
        eq4b_rhs=eq4b.rhs,
        case=case,
        bypass_delta=bypass,
    )


def sweep(system_kind: str, phi_grid: Sequence[float]) -> list[SweepRow]:
    if len(phi_grid) == 0:
        raise ValueError("phi grid is empty")
    _system(system_kind)
    return [sweep_row(system_kind, float(phi)) for phi in phi_grid]


def default_grid(n: int = 181) -> np.ndarray:
    """``n`` points on [0, pi]; with n = 181 the step is exactly one degree."""
    return np.linspace(0.0, math.pi, n)


def toggle_check(phi: float, role: str = "x", tol: float = 1e-12) -> bool:
    """Whether the chosen spin component swaps the qutrit state with ``|1,0>``.

    Checks ``O psi = chi``, ``O chi = psi``, ``O^2 psi = psi`` and
    ``O^2 chi = chi`` with ``chi`` equal to ``|1,0>`` up to a phase.
    """
    s = spin_matrices(1)
    O = {"x": s.Jx, "y": s.Jy}[role].matrix
    psi = qutrit_state(phi).amplitudes
    phi0 = s.basis_state(0).amplitudes
    chi = O @ psi
    if abs(np.linalg.norm(chi) - 1.0) > tol or abs(abs(np.vdot(phi0, chi)) - 1.0) > tol:
        return False
    O2 = O @ O
    return bool(
        np.allclose(O @ chi, psi, rtol=0, atol=tol)
        and np.allclose(O2 @ psi, psi, rtol=0, atol=tol)
        and np.allclose(O2 @ chi, chi, rtol=0, atol=tol)
    )


# ---------------------------------------------------------------------------
# Three-state comparison example (spin 1, uniform superposition)


@dataclass(frozen=True)
class Table1Row:
    label: str
    exact_form: str
    exact_value: float
    report: BoundReport

    @property
    def error(self) -> float:
        return abs(self.report.rhs - self.exact_value)


def table1_inputs():
    s = spin_matrices(1)
    psi = QuantumState(np.ones(3) / SQRT3, label="psi")
    n1 = QuantumState(np.array([-1.0, 1.0, 0.0]) / SQRT2, label="N1")
    n2 = QuantumState(np.array([1.0, -1.0, -1.0]) / SQRT3, label="N2")
    return s.Jx, s.Jy, psi, n1, n2


TABLE1_EXACT = {
    "4a (i)": ("1/3", 1 / 3),
    "4a (ii)": ("32/81", 32 / 81),
    "4b (i)": ("1/12", 1 / 12),
    "4b (ii)": ("10/81", 10 / 81),
    "5a": ("59/81", 59 / 81),
    "5b": ("67/162", 67 / 162),
    "13 (i)": ("1/12", 1 / 12),
    "13 (ii)": ("2/27", 2 / 27),
    "14 (i)": ("1/sqrt3", 1 / SQRT3),
    "14 (ii)": ("4sqrt2/9", 4 * SQRT2 / 9),
    "15": ("1/(3sqrt6)", 1 / (3 * SQRT6)),
    "16": ("(sqrt3+2sqrt2)/6", (SQRT3 + 2 * SQRT2) / 6),
    "17 (i)": ("1/6", 1 / 6),
    "17 (ii)": ("4/27", 4 / 27),
}


def table1_scenario() -> list[Table1Row]:
    """All fourteen right-hand sides of the comparison table, with exact forms."""
    A, B, psi, n1, n2 = table1_inputs()
    # N2 is not orthogonal to psi; the table uses it in the sum forms anyway
    loose = {"allow_nonorthogonal": True}
    reports = {
        "4a (i)": bounds.sum_bound_4a(A, B, psi, n1, **loose),
        "4a (ii)": bounds.sum_bound_4a(A, B, psi, n2, **loose),
        "4b (i)": bounds.sum_bound_4b(A, B, psi, n1, **loose),
        "4b (ii)": bounds.sum_bound_4b(A, B, psi, n2, **loose),
        "5a": bounds.weighted_sum_5a(A, B, psi, n1, n2, 1.0, **loose),
        "5b": bounds.weighted_sum_5b(A, B, psi, n1, n2, 1.0, **loose),
        "13 (i)": bounds.product_one_aux(A, B, psi, n1),
        "13 (ii)": bounds.product_one_aux(A, B, psi, n2),
        "14 (i)": bounds.sum_one_aux(A, B, psi, n1),
        "14 (ii)": bounds.sum_one_aux(A, B, psi, n2),
        "15": bounds.product_two_aux(A, B, psi, n1, n2),
        "16": bounds.sum_two_aux(A, B, psi, n1, n2),
        "17 (i)": bounds.strengthened_product(A, B, psi, n1),
        "17 (ii)": bounds.strengthened_product(A, B, psi, n2),
    }
    return [Table1Row(k, *TABLE1_EXACT[k], reports[k]) for k in TABLE1_EXACT]


@dataclass(frozen=True)
class HeadlineBound:
    label: str
    quantity: str
    exact_form: str
    exact_value: float
    value: float
    actual: float


def headline_bounds(rows: Optional[list[Table1Row]] = None) -> list[HeadlineBound]:
    """Best product, variance-sum and deviation-sum bounds from the table.

    A fourth entry combines the best variance-sum and product bounds into a
    deviation-sum bound, ``sqrt(32/81 + 2/6)``.
    """
    rows = rows if rows is not None else table1_scenario()
    by = {r.label: r for r in rows}
    prod, var_sum, dev_sum = by["17 (i)"], by["4a (ii)"], by["16"]
    combined = math.sqrt(var_sum.report.rhs + 2 * prod.report.rhs)
    return [
        HeadlineBound("17 (i)", "dJx*dJy", "1/6", 1 / 6, prod.report.rhs, prod.report.lhs),
        HeadlineBound("4a (ii)", "dJx^2+dJy^2", "32/81", 32 / 81, var_sum.report.rhs, var_sum.report.lhs),
        HeadlineBound("16", "dJx+dJy", "(sqrt3+2sqrt2)/6", (SQRT3 + 2 * SQRT2) / 6,
                      dev_sum.report.rhs, dev_sum.report.lhs),
        HeadlineBound("combined", "dJx+dJy", "sqrt(59/81)", math.sqrt(59 / 81), combined, dev_sum.report.lhs),
    ]


def table1_overlaps() -> dict[str, complex]:
    A, B, psi, n1, n2 = table1_inputs()
    dA, dB = deviation_vector(A, psi), deviation_vector(B, psi)
    return {
        "<Psi_A|N1>": inner(dA.vector, n1.amplitudes),
        "<Psi_B|N1>": inner(dB.vector, n1.amplitudes),
        "<Psi_A|N2>": inner(dA.vector, n2.amplitudes),
        "<Psi_B|N2>": inner(dB.vector, n2.amplitudes),
    }
