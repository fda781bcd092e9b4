import os
import tempfile
import unittest

import numpy as np
from hypothesis import given, settings as hypothesis_settings, strategies as st

from wvnn.wvnnerrors import DegenerateInputError, DomainError, HermiticityViolationError, UsageError
from wvnn.wvnnlinalg import eigvals_closed, match_spectra
from wvnn.wvnnstates import (
    HALF_PI,
    BlochObservableParams,
    QubitParams,
    QutritParams,
    bloch_observable,
    fubini_angle,
    gellmann,
    observable_from_matrix,
    observable_from_spec,
    overlap,
    parse_angle,
    pauli,
    qubit_state,
    qutrit_state,
    state_from_angles,
    uncertainty_sq,
)

angles = st.floats(min_value=0.0, max_value=HALF_PI)
phases = st.floats(min_value=0.0, max_value=2 * np.pi)


class TestStates(unittest.TestCase):
    def test_qubit_state(self):
        np.testing.assert_allclose(qubit_state(QubitParams(0.0, 1.3)), [1, 0])
        np.testing.assert_allclose(qubit_state(QubitParams(HALF_PI, np.pi)), [0, -1], atol=1e-15)
        np.testing.assert_allclose(qubit_state(QubitParams(np.pi / 4)), [1 / np.sqrt(2), 1 / np.sqrt(2)])

    def test_qutrit_state(self):
        np.testing.assert_allclose(qutrit_state(QutritParams(0.0, 0.3, 1.0, 2.0)), [1, 0, 0], atol=1e-15)
        np.testing.assert_allclose(qutrit_state(QutritParams(HALF_PI)), [0, 1, 0], atol=1e-15)
        np.testing.assert_allclose(qutrit_state(QutritParams(HALF_PI, HALF_PI, 0, HALF_PI)), [0, 0, 1j], atol=1e-15)

    def test_out_of_range_parameters(self):
        with self.assertRaises(DomainError):
            QubitParams(2.0)
        with self.assertRaises(DomainError):
            QubitParams(0.5, -0.1)
        with self.assertRaises(DomainError):
            QutritParams(0.5, alpha=1.7)
        with self.assertRaises(DomainError):
            BlochObservableParams(0.5, 7.0)

    def test_wrapped_constructor_matches_up_to_phase(self):
        for theta, xi in ((2.0, 0.3), (-0.4, 1.0), (4.0, 5.9)):
            raw = np.array([np.cos(theta), np.exp(1j * xi) * np.sin(theta)])
            folded = qubit_state(QubitParams.wrapped(theta, xi))
            self.assertAlmostEqual(abs(np.vdot(raw, folded)), 1.0, places=12)

    @hypothesis_settings(max_examples=100, deadline=None)
    @given(angles, angles, phases, phases)
    def test_states_have_unit_norm(self, theta, alpha, chi1, chi2):
        self.assertAlmostEqual(np.linalg.norm(qubit_state(QubitParams(theta, chi1))), 1.0, delta=1e-14)
        self.assertAlmostEqual(np.linalg.norm(qutrit_state(QutritParams(theta, alpha, chi1, chi2))), 1.0, delta=1e-14)

    def test_overlap(self):
        a = qubit_state(QubitParams(0.3))
        self.assertAlmostEqual(overlap(a, a), 1.0)
        self.assertEqual(overlap([1, 0], [0, 1]), 0)
        b = qubit_state(QubitParams(1.1))
        self.assertAlmostEqual(overlap(b, a), np.cos(1.1 - 0.3), places=14)
        with self.assertRaises(DegenerateInputError):
            overlap([1, 0], [1, 0, 0])
        with self.assertRaises(DegenerateInputError):
            overlap([1, 1], [1, 0])

    def test_fubini_angle(self):
        self.assertEqual(fubini_angle([1, 0], [2, 0]), 0.0)
        self.assertAlmostEqual(fubini_angle([1, 0], [0, 1]), HALF_PI)
        self.assertAlmostEqual(fubini_angle([1, 0], [1, 1]), np.pi / 4, places=14)
        with self.assertRaises(DegenerateInputError):
            fubini_angle([0, 0], [1, 0])

    def test_fubini_angle_symmetric_and_phase_invariant(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            v1 = rng.normal(size=3) + 1j * rng.normal(size=3)
            v2 = rng.normal(size=3) + 1j * rng.normal(size=3)
            angle = fubini_angle(v1, v2)
            self.assertAlmostEqual(angle, fubini_angle(v2, v1), delta=1e-12)
            self.assertAlmostEqual(angle, fubini_angle(np.exp(0.7j) * v1, v2), delta=1e-12)


class TestObservables(unittest.TestCase):
    def test_pauli(self):
        np.testing.assert_array_equal(pauli("x").matrix, [[0, 1], [1, 0]])
        np.testing.assert_array_equal(pauli("y").matrix, [[0, -1j], [1j, 0]])
        np.testing.assert_array_equal(pauli("z").matrix, [[1, 0], [0, -1]])
        for k in "xyz":
            o = pauli(k)
            self.assertLess(match_spectra(o.spectrum, [-1, 1]), 1e-15)
            np.testing.assert_allclose(o.squared, np.eye(2), atol=1e-15)
        with self.assertRaises(DomainError):
            pauli("w")

    def test_gellmann(self):
        np.testing.assert_array_equal(gellmann(5).matrix, [[0, 0, -1j], [0, 0, 0], [1j, 0, 0]])
        np.testing.assert_allclose(gellmann(3).matrix, np.diag([1, -1, 0]))
        np.testing.assert_allclose(gellmann(8).matrix, np.diag([1, 1, -2]) / np.sqrt(3))
        with self.assertRaises(DomainError):
            gellmann(9)

    def test_gellmann_orthogonality(self):
        for a in range(1, 9):
            self.assertAlmostEqual(np.trace(gellmann(a).matrix).real, 0.0, delta=1e-15)
            for b in range(1, 9):
                product = np.trace(gellmann(a).matrix @ gellmann(b).matrix)
                self.assertAlmostEqual(product, 2.0 if a == b else 0.0, delta=1e-12)

    def test_bloch_observable(self):
        np.testing.assert_allclose(bloch_observable(BlochObservableParams(0.0, 1.0)).matrix, pauli("z").matrix)
        np.testing.assert_allclose(
            bloch_observable(BlochObservableParams(HALF_PI, 0.0)).matrix, pauli("x").matrix, atol=1e-16
        )
        theta, phi = 0.4, np.pi / 4
        s = np.sin(theta)
        expected = [[np.cos(theta), (1 - 1j) / np.sqrt(2) * s], [(1 + 1j) / np.sqrt(2) * s, -np.cos(theta)]]
        np.testing.assert_allclose(bloch_observable(BlochObservableParams(theta, phi)).matrix, expected, atol=1e-15)

    def test_bloch_spectrum_on_grid(self):
        for theta in np.linspace(0, HALF_PI, 50):
            for phi in np.linspace(0, 2 * np.pi, 50):
                o = bloch_observable(BlochObservableParams(theta, phi))
                self.assertLess(match_spectra(o.spectrum, [-1, 1]), 1e-12)

    def test_observable_from_matrix(self):
        self.assertLess(match_spectra(observable_from_matrix(pauli("x").matrix).spectrum, [-1, 1]), 1e-15)
        m = (pauli("x").matrix + pauli("y").matrix + pauli("z").matrix) / np.sqrt(3)
        self.assertLess(match_spectra(observable_from_matrix(m).spectrum, [-1, 1]), 1e-12)
        self.assertLess(match_spectra(eigvals_closed(m), [-1, 1]), 1e-12)
        with self.assertRaises(HermiticityViolationError) as context:
            observable_from_matrix([[0, 1], [0, 0]])
        self.assertAlmostEqual(context.exception.defect, np.sqrt(2))

    def test_matrix_is_read_only(self):
        with self.assertRaises(ValueError):
            pauli("x").matrix[0, 0] = 5

    def test_uncertainty(self):
        self.assertAlmostEqual(uncertainty_sq(pauli("z"), np.array([1, 0], dtype=complex)), 0.0)
        self.assertAlmostEqual(uncertainty_sq(pauli("x"), np.array([1, 0], dtype=complex)), 1.0)


class TestParsing(unittest.TestCase):
    def test_parse_angle(self):
        self.assertAlmostEqual(parse_angle("pi/12"), np.pi / 12)
        self.assertAlmostEqual(parse_angle("5*pi/12"), 5 * np.pi / 12)
        self.assertAlmostEqual(parse_angle("59pi/120"), 59 * np.pi / 120)
        self.assertAlmostEqual(parse_angle("3pi/2"), 1.5 * np.pi)
        self.assertAlmostEqual(parse_angle("-pi/4"), -np.pi / 4)
        self.assertAlmostEqual(parse_angle("1.5446"), 1.5446)
        self.assertEqual(parse_angle(0.25), 0.25)
        for bad in ("", "pie", "1/", "x"):
            with self.assertRaises(UsageError):
                parse_angle(bad)

    def test_observable_from_spec(self):
        self.assertEqual(observable_from_spec("pauli:x").name, "pauli-x")
        self.assertEqual(observable_from_spec("gellmann:5").dim, 3)
        self.assertLess(match_spectra(observable_from_spec("sum:x+y+z").spectrum, observable_from_spec("sum:z+y+x").spectrum), 1e-14)
        np.testing.assert_allclose(observable_from_spec("bloch:pi/2,0").matrix, pauli("x").matrix, atol=1e-16)
        for bad in ("pauli", "spin:x", "gellmann:five", "sum:x+x"):
            with self.assertRaises((UsageError, DomainError)):
                observable_from_spec(bad)

    def test_observable_from_matrix_file(self):
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, "sy.txt")
            with open(path, "w") as f:
                f.write("# sigma y\n0 -1i\n1i 0\n")
            o = observable_from_spec(f"matrix:{path}")
            np.testing.assert_array_equal(o.matrix, pauli("y").matrix)
            self.assertEqual(o.name, "sy")
            with self.assertRaises(UsageError):
                observable_from_spec(f"matrix:{folder}/missing.txt")

    def test_state_from_angles(self):
        np.testing.assert_allclose(state_from_angles(0.3, 0.2), qubit_state(QubitParams(0.3, 0.2)))
        psi = state_from_angles(HALF_PI, 0.0, {"alpha": HALF_PI, "chi2": HALF_PI}, dim=3)
        np.testing.assert_allclose(psi, [0, 0, 1j], atol=1e-15)
        with self.assertRaises(DomainError):
            state_from_angles(0.3, 0.0, dim=4)


if __name__ == "__main__":
    unittest.main()
