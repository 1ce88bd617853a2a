import math
from fractions import Fraction

import numpy as np
import pytest

from uncertainty_bounds.hilbert import CaseTag, QuantumState, classify_case, deviation_vector, expectation
from uncertainty_bounds.spin import (
    default_grid,
    headline_bounds,
    pauli,
    qubit_state,
    qutrit_state,
    spin_matrices,
    sweep,
    table1_overlaps,
    table1_scenario,
    toggle_check,
)

SPINS = [Fraction(1, 2), 1, Fraction(3, 2), 2, Fraction(5, 2), 3]


def comm(X, Y):
    return X @ Y - Y @ X


@pytest.mark.parametrize("j", SPINS)
def test_commutation_relations(j):
    s = spin_matrices(j)
    x, y, z = s.Jx.matrix, s.Jy.matrix, s.Jz.matrix
    np.testing.assert_allclose(comm(x, y), 1j * z, atol=1e-12)
    np.testing.assert_allclose(comm(y, z), 1j * x, atol=1e-12)
    np.testing.assert_allclose(comm(z, x), 1j * y, atol=1e-12)
    jv = float(j)
    np.testing.assert_allclose(s.Jsq.matrix, jv * (jv + 1) * np.eye(s.dim), atol=1e-12)
    np.testing.assert_allclose(x, (s.Jplus + s.Jminus) / 2)
    np.testing.assert_allclose(y, (s.Jplus - s.Jminus) / 2j)


@pytest.mark.parametrize("j", SPINS)
def test_ladder_matrix_elements(j):
    s = spin_matrices(j)
    jv = float(j)
    for k in range(1, s.dim):
        mu = jv - k
        assert s.Jplus[k - 1, k] == pytest.approx(math.sqrt((jv - mu) * (jv + mu + 1)))


def test_spin_half_is_half_pauli():
    sx, sy, sz = pauli()
    for P in (sx, sy, sz):
        np.testing.assert_allclose(P.matrix @ P.matrix, np.eye(2), atol=1e-15)
    np.testing.assert_allclose(spin_matrices(0.5).Jx.matrix, sx.matrix / 2)


def test_spin_one_jx():
    expected = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]]) / math.sqrt(2)
    np.testing.assert_allclose(spin_matrices(1).Jx.matrix, expected, atol=1e-15)


@pytest.mark.parametrize("bad", [0, -1, 0.3, Fraction(1, 3), "x"])
def test_invalid_spin(bad):
    with pytest.raises(ValueError):
        spin_matrices(bad)


@pytest.mark.parametrize("j", [Fraction(1, 2), 1, Fraction(3, 2), 2, Fraction(5, 2), 3])
def test_basis_states_have_zero_transverse_means(j):
    s = spin_matrices(j)
    jv = float(j)
    mus = [jv - k for k in range(s.dim)]
    for mu in mus:
        st = s.basis_state(Fraction(mu).limit_denominator(2))
        assert expectation(s.Jx, st) == pytest.approx(0, abs=1e-15)
        assert expectation(s.Jy, st) == pytest.approx(0, abs=1e-15)
    rng = np.random.default_rng(1)
    for a in range(s.dim):
        for b in range(s.dim):
            if abs(a - b) == 1 or a == b:
                continue
            c = rng.normal(size=2) + 1j * rng.normal(size=2)
            v = np.zeros(s.dim, complex)
            v[a], v[b] = c
            st = QuantumState.from_vector(v)
            assert expectation(s.Jx, st) == pytest.approx(0, abs=1e-14)
            assert expectation(s.Jy, st) == pytest.approx(0, abs=1e-14)


@pytest.mark.parametrize("phi", np.linspace(0, math.pi, 13))
def test_qutrit_state_properties(phi):
    s = spin_matrices(1)
    psi = qutrit_state(phi)
    assert expectation(s.Jx, psi) == pytest.approx(0, abs=1e-15)
    assert expectation(s.Jy, psi) == pytest.approx(0, abs=1e-15)
    np.testing.assert_allclose(s.Jsq.matrix @ psi.amplitudes, 2 * psi.amplitudes, atol=1e-14)
    np.testing.assert_allclose(s.Jz.matrix @ s.Jz.matrix @ psi.amplitudes, psi.amplitudes, atol=1e-14)


@pytest.mark.parametrize("phi", np.linspace(0, math.pi, 13))
def test_qubit_state_properties(phi):
    sx, sy, _ = pauli()
    psi = qubit_state(phi)
    assert expectation(sx, psi) == pytest.approx(math.sin(2 * phi), abs=1e-15)
    assert expectation(sy, psi) == pytest.approx(0, abs=1e-15)
    total = deviation_vector(sx, psi).variance + deviation_vector(sy, psi).variance
    assert total == pytest.approx(1 + math.cos(2 * phi) ** 2, abs=1e-14)
    np.testing.assert_allclose((sx.matrix @ sx.matrix + sy.matrix @ sy.matrix) @ psi.amplitudes,
                               2 * psi.amplitudes, atol=1e-14)


def test_special_points():
    s = spin_matrices(1)
    assert deviation_vector(s.Jy, qutrit_state(math.pi / 4)).norm < 1e-15
    assert deviation_vector(s.Jx, qutrit_state(3 * math.pi / 4)).norm < 1e-15
    sx, _, _ = pauli()
    assert deviation_vector(sx, qubit_state(math.pi / 4)).norm < 1e-15


def test_pauli_squares_commute():
    sx, sy, _ = pauli()
    assert np.max(np.abs(comm(sx.matrix, sy.matrix))) > 1
    assert np.max(np.abs(comm(sx.matrix @ sx.matrix, sy.matrix @ sy.matrix))) < 1e-12


def test_qutrit_sweep_rows():
    rows = sweep("qutrit", default_grid())
    assert len(rows) == 181
    for r in rows:
        assert r.var_a >= 0 and r.var_b >= 0
        assert r.eq2_lhs == pytest.approx(0.5 * abs(math.cos(2 * r.phi)), abs=1e-12)
        assert r.var_sum == pytest.approx(1.0, abs=1e-12)
    assert rows[0].eq2_lhs == pytest.approx(0.5, abs=1e-15)
    special = [r.phi for r in rows if r.case.is_case2]
    np.testing.assert_allclose(special, [math.pi / 4, 3 * math.pi / 4], atol=1e-15)
    for r in rows:
        if not r.case.is_case2:
            assert r.case is CaseTag.CASE1_DEPENDENT and r.eq2_saturated


def test_qutrit_sweep_bypass_at_special_point():
    (row,) = sweep("qutrit", [math.pi / 4])
    assert row.case is CaseTag.CASE2_ZERO_B
    assert row.bypass_delta == pytest.approx(math.sqrt(row.var_a), abs=1e-12)


def test_qubit_sweep_rows():
    for r in sweep("qubit", default_grid()):
        assert r.eq2_lhs == pytest.approx(abs(math.cos(2 * r.phi)), abs=1e-12)
        assert r.var_sum == pytest.approx(1 + math.cos(2 * r.phi) ** 2, abs=1e-12)


def test_sweep_rejects_empty_and_unknown():
    with pytest.raises(ValueError):
        sweep("qutrit", [])
    with pytest.raises(ValueError):
        sweep("ququart", [0.1])


def test_case_classification_along_sweep():
    s = spin_matrices(1)
    for phi in (0.1, 0.7, 1.2, 2.0, 3.0):
        psi = qutrit_state(phi)
        assert classify_case(deviation_vector(s.Jx, psi), deviation_vector(s.Jy, psi)).tag \
            is CaseTag.CASE1_DEPENDENT


def test_toggle():
    assert toggle_check(math.pi / 4)
    assert not toggle_check(0.0)
    assert not toggle_check(0.4)
    assert toggle_check(3 * math.pi / 4, role="y")
    assert not toggle_check(math.pi / 4, role="y")


def test_table1_scenario():
    rows = table1_scenario()
    assert len(rows) == 14
    for r in rows:
        assert r.error <= 1e-12, r.label
        assert r.report.valid
    by = {r.label: r for r in rows}
    actual = 1 / (3 * math.sqrt(3))
    for label in ("13 (i)", "13 (ii)", "15", "17 (i)", "17 (ii)"):
        assert by[label].report.lhs == pytest.approx(actual, abs=1e-15)
        assert by[label].report.rhs <= actual


def test_table1_overlaps():
    ov = table1_overlaps()
    assert ov["<Psi_A|N1>"] == pytest.approx(1 / (2 * math.sqrt(3)), abs=1e-15)
    assert abs(ov["<Psi_B|N1>"]) == pytest.approx(1 / (2 * math.sqrt(3)), abs=1e-15)
    assert ov["<Psi_A|N2>"] == pytest.approx(-math.sqrt(2) / 9, abs=1e-15)
    assert abs(ov["<Psi_B|N2>"]) == pytest.approx(math.sqrt(2) / 3, abs=1e-15)


def test_headline_bounds():
    heads = {h.label: h for h in headline_bounds()}
    for h in heads.values():
        assert h.value == pytest.approx(h.exact_value, abs=1e-12)
        assert h.value <= h.actual
    # the combined estimate is numerically larger than the direct two-state sum bound
    assert heads["combined"].value > heads["16"].value
