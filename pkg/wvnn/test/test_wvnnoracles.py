import unittest

import numpy as np
from hypothesis import assume, given, settings as hypothesis_settings, strategies as st

from wvnn import wvnnoracles as oracles
from wvnn.wvnnerrors import (
    DomainError,
    ExcludedParameterError,
    NearOrthogonalPostselectionError,
    NoRealSolutionError,
)
from wvnn.wvnnstates import HALF_PI, bloch_matrix, observable_from_matrix, pauli, state_from_angles
from wvnn.wvnnsweep import amplification_window
from wvnn.wvnnweak import analyze, normalized_henrici

angles = st.floats(0.0, HALF_PI)
phases = st.floats(0.0, 2 * np.pi)


def real_qubit(theta):
    return np.array([np.cos(theta), np.sin(theta)], dtype=complex)


class TestSigmaX(unittest.TestCase):
    @hypothesis_settings(max_examples=100, deadline=None)
    @given(angles, angles, phases, phases)
    def test_closed_forms_match_matrix_route(self, theta_i, theta_f, xi_i, xi_f):
        s = oracles.QubitScenario(theta_i, theta_f, xi_i, xi_f)
        assume(s.overlap_sq() > 1e-3)
        report = analyze(pauli("x"), state_from_angles(theta_i, xi_i), state_from_angles(theta_f, xi_f))
        self.assertAlmostEqual(s.overlap_sq(), report.overlap_sq, delta=1e-12)
        self.assertAlmostEqual(oracles.sx_df(s), report.henrici_A, delta=1e-9 * max(1.0, report.henrici_A))
        wv_sq = abs(report.value) ** 2
        self.assertAlmostEqual(oracles.sx_wv_sq(s), wv_sq, delta=1e-9 * max(1.0, wv_sq))

    def test_reduced_forms(self):
        theta_i, theta_f = 0.35, 1.1
        self.assertAlmostEqual(
            oracles.sx_df_reduced(theta_i, theta_f), oracles.sx_df_values(theta_i, theta_f), delta=1e-13
        )
        self.assertAlmostEqual(
            oracles.sx_wv_sq_reduced(theta_i, theta_f), oracles.sx_wv_sq_values(theta_i, theta_f), delta=1e-13
        )

    def test_overlap_floor(self):
        with self.assertRaises(NearOrthogonalPostselectionError):
            oracles.sx_df(oracles.QubitScenario(0.0, HALF_PI))

    def test_scenario_ranges(self):
        with self.assertRaises(DomainError):
            oracles.QubitScenario(2.0, 0.1)

    def test_theta_tilde_f(self):
        self.assertAlmostEqual(oracles.sx_theta_tilde_f(0.3), np.pi / 4, delta=1e-15)
        for theta_i, xi_i, xi_f in ((0.3, 0.5, 1.0), (1.2, 2.0, 0.4), (0.6, 4.0, 5.5)):
            theta_tilde = oracles.sx_theta_tilde_f(theta_i, xi_i, xi_f)
            self.assertGreaterEqual(theta_tilde, 0.0)
            self.assertLessEqual(theta_tilde, HALF_PI)
            self.assertAlmostEqual(
                oracles.sx_wv_sq_values(theta_i, theta_tilde, xi_i, xi_f), 1.0, delta=1e-10
            )
        with self.assertRaises(ExcludedParameterError):
            oracles.sx_theta_tilde_f(np.pi / 4)

    def test_theta_hat_f_is_stationary(self):
        for theta_i, xi_i, xi_f in ((0.3, 0.0, 0.0), (0.5, 1.0, 0.4), (1.1, 0.3, 2.0)):
            theta_hat = oracles.sx_theta_hat_f(theta_i, xi_i, xi_f)
            self.assertGreater(theta_hat, 1e-3)
            self.assertLess(theta_hat, HALF_PI - 1e-3)
            slope = oracles.central_difference(
                lambda t: oracles.sx_df_values(theta_i, t, xi_i, xi_f), theta_hat, h=1e-5
            )
            self.assertLess(abs(slope), 1e-6 * max(1.0, float(oracles.sx_df_values(theta_i, theta_hat, xi_i, xi_f))))
        self.assertAlmostEqual(oracles.sx_theta_hat_f(0.4), 0.4, delta=1e-14)
        self.assertEqual(oracles.sx_theta_hat_f(np.pi / 4), np.pi / 4)

    def test_theta_hat_maximum_flag(self):
        # equal phases put the overlap minimum at theta_i + pi/2, outside [0, pi/2]
        self.assertFalse(oracles.sx_theta_hat_is_maximum(0.4))
        theta_i, xi_i, xi_f = 0.5, 0.0, 2.5
        theta_hat = oracles.sx_theta_hat_f(theta_i, xi_i, xi_f)
        self.assertTrue(oracles.sx_theta_hat_is_maximum(theta_i, xi_i, xi_f))
        peak = float(oracles.sx_df_values(theta_i, theta_hat, xi_i, xi_f))
        for delta in (-0.05, 0.05):
            self.assertLess(float(oracles.sx_df_values(theta_i, theta_hat + delta, xi_i, xi_f)), peak)

    def test_tan_thetaf_round_trip(self):
        for theta_i, theta_f, xi_i, xi_f in ((0.05, 0.8, 0.0, 0.0), (1.5, 0.4, 0.0, 0.0), (0.3, 1.0, 0.7, 2.1)):
            d_f = float(oracles.sx_df_values(theta_i, theta_f, xi_i, xi_f))
            roots = [oracles.sx_tan_thetaf_of_df(d_f, theta_i, xi_i, xi_f, branch) for branch in ("plus", "minus")]
            closest = min(abs(r - np.tan(theta_f)) for r in roots)
            self.assertLess(closest, 1e-9 * max(1.0, np.tan(theta_f)))
            wv_sq = oracles.sx_wv_sq_of_tan(np.tan(theta_f), theta_i, xi_i, xi_f, d_f)
            self.assertAlmostEqual(wv_sq, float(oracles.sx_wv_sq_values(theta_i, theta_f, xi_i, xi_f)), delta=1e-10)

    def test_unreachable_departure(self):
        low, high = oracles.sx_df_range(0.3)
        self.assertAlmostEqual(low, abs(np.cos(0.6)), delta=1e-14)
        self.assertGreater(high, 1e12)
        with self.assertRaises(NoRealSolutionError):
            oracles.sx_tan_thetaf_of_df(0.5 * low, 0.3)
        with self.assertRaises(ValueError):
            oracles.sx_tan_thetaf_of_df(2.0, 0.3, branch="both")


class TestSigmaYZ(unittest.TestCase):
    def test_sigma_y(self):
        wv, df = oracles.sy_relations(0.2, 0.2 + np.pi / 4)
        self.assertAlmostEqual(wv, 1j, delta=1e-15)
        self.assertAlmostEqual(df, 2.0, delta=1e-14)

    @hypothesis_settings(max_examples=60, deadline=None)
    @given(angles, angles)
    def test_sigma_y_matches_matrix_route(self, theta_i, theta_f):
        assume(np.cos(theta_f - theta_i) ** 2 > 1e-3)
        wv, df = oracles.sy_relations(theta_i, theta_f)
        report = analyze(pauli("y"), real_qubit(theta_i), real_qubit(theta_f))
        self.assertAlmostEqual(wv, report.value, delta=1e-10 * max(1.0, abs(wv)))
        self.assertAlmostEqual(df, report.henrici_A, delta=1e-10 * df)
        self.assertAlmostEqual(abs(wv) ** 2, df - 1, delta=1e-10 * df)

    @hypothesis_settings(max_examples=60, deadline=None)
    @given(angles, angles)
    def test_sigma_z_matches_matrix_route(self, theta_i, theta_f):
        assume(np.cos(theta_f - theta_i) ** 2 > 1e-3)
        wv_abs, df = oracles.sz_relations(theta_i, theta_f)
        report = analyze(pauli("z"), real_qubit(theta_i), real_qubit(theta_f))
        self.assertAlmostEqual(wv_abs, abs(report.value), delta=1e-10 * max(1.0, wv_abs))
        self.assertAlmostEqual(df, report.henrici_A, delta=1e-10 * max(1.0, df))

    def test_sigma_z_inverse(self):
        for theta_i, theta_f in ((0.3, 0.9), (0.9, 0.3), (1.2, 1.4)):
            wv_abs, df = oracles.sz_relations(theta_i, theta_f)
            candidates = [oracles.sz_wv_sq_of_df(theta_i, df, branch) for branch in ("plus", "minus")]
            self.assertLess(min(abs(c - wv_abs**2) for c in candidates), 1e-10 * max(1.0, wv_abs**2))
        with self.assertRaises(ExcludedParameterError):
            oracles.sz_wv_sq_of_df(0.0, 2.0)
        with self.assertRaises(NoRealSolutionError):
            oracles.sz_wv_sq_of_df(0.3, 0.1)


class TestObservableFamily(unittest.TestCase):
    def test_quantities_match_matrix_route(self):
        for theta_i, theta in ((0.2, 0.3), (0.7, 1.0), (1.3, 0.6)):
            q = oracles.appc_quantities(oracles.AppendixCScenario(theta_i, theta))
            o = observable_from_matrix(bloch_matrix(theta, oracles.FAMILY_PHI))
            psi_i, psi_f = real_qubit(theta_i), real_qubit(0.0)
            report = analyze(o, psi_i, psi_f)
            self.assertAlmostEqual(q.wv_abs, abs(report.value), delta=1e-12)
            self.assertAlmostEqual(q.df_A, normalized_henrici(o, psi_f), delta=1e-12)
            self.assertAlmostEqual(q.df_Aprime, normalized_henrici(o, psi_i), delta=1e-10)
            self.assertAlmostEqual(abs(q.alpha_A), report.alpha2_Aprime * report.overlap_sq, delta=1e-12)
            self.assertAlmostEqual(abs(q.alpha_Aprime), report.alpha2_A * report.overlap_sq, delta=1e-12)

    def test_weak_value_is_one_at_zero(self):
        for theta_i in np.linspace(0.0, 1.5, 7):
            self.assertAlmostEqual(oracles.appc_quantities(oracles.AppendixCScenario(theta_i, 0.0)).wv_abs, 1.0)
        self.assertAlmostEqual(oracles.appc_quantities(oracles.AppendixCScenario(0.4, HALF_PI)).alpha_A, 0.0)

    def test_argmax_theta(self):
        theta = np.linspace(0.0, HALF_PI, 200001)
        for theta_i in (0.1, 0.5, 0.9, 1.3):
            wv_abs = oracles.appc_values(theta_i, theta).wv_abs
            self.assertAlmostEqual(oracles.appc_argmax_theta(theta_i), theta[np.argmax(wv_abs)], delta=1e-4)

    def test_argmax_is_continuous_at_quarter(self):
        below = oracles.appc_argmax_theta(np.pi / 4 - 1e-6)
        above = oracles.appc_argmax_theta(np.pi / 4 + 1e-6)
        self.assertAlmostEqual(below, above, delta=1e-5)

    def test_window(self):
        lo, hi = oracles.appc_window(0.3)
        self.assertEqual(lo, 0.0)
        self.assertAlmostEqual(float(oracles.appc_values(0.3, hi).wv_abs), 1.0, delta=1e-12)
        self.assertEqual(oracles.appc_window(1.0), (0.0, HALF_PI))

    def test_nilpotent_angles(self):
        first, second = oracles.appc_nilpotent_angles(0.5)
        self.assertEqual(first, HALF_PI)
        self.assertTrue(np.isnan(second))
        first, second = oracles.appc_nilpotent_angles(1.2)
        self.assertGreater(second, 0.0)
        self.assertLess(second, HALF_PI)
        self.assertAlmostEqual(float(oracles.appc_values(1.2, second).alpha_Aprime), 0.0, delta=1e-14)
        self.assertAlmostEqual(float(oracles.appc_values(1.2, first).alpha_A), 0.0, delta=1e-15)


class TestDerivatives(unittest.TestCase):
    def test_values_match_matrix_route(self):
        rng = np.random.default_rng(31)
        for _ in range(50):
            theta, theta_i, theta_f = rng.uniform(0.0, HALF_PI, size=3)
            phi = rng.uniform(0.0, 2 * np.pi)
            o = observable_from_matrix(bloch_matrix(theta, phi))
            psi_i, psi_f = real_qubit(theta_i), real_qubit(theta_f)
            values = oracles.appd_values_and_derivatives(theta, theta_i, theta_f, phi)
            numerator = abs(np.vdot(psi_f, o.matrix @ psi_i))
            self.assertAlmostEqual(values.numerator, numerator, delta=1e-12)
            self.assertAlmostEqual(values.dfn_1, normalized_henrici(o, psi_f), delta=1e-9)
            self.assertAlmostEqual(values.dfn_2, normalized_henrici(o, psi_i), delta=1e-9)

    def test_derivatives_match_finite_differences(self):
        rng = np.random.default_rng(37)
        checked = 0
        while checked < 40:
            theta, theta_i, theta_f = rng.uniform(0.05, HALF_PI - 0.05, size=3)
            phi = rng.uniform(0.0, 2 * np.pi)
            values = oracles.appd_values_and_derivatives(theta, theta_i, theta_f, phi)
            if min(values.numerator, values.dfn_1, values.dfn_2) < 1e-2:
                continue
            for index in range(3):
                numeric = oracles.central_difference(
                    lambda x: oracles.appd_values(x, theta_i, theta_f, phi)[index], theta
                )
                self.assertAlmostEqual(values[index + 3], numeric, delta=1e-6 * max(1.0, abs(numeric)))
            checked += 1

    def test_numerator_derivative_between_departure_derivatives(self):
        phi = np.pi / 12
        for k in range(59, 50, -1):
            theta_i = k * np.pi / 120
            lo, hi = amplification_window(theta_i, phi, 0.0)
            theta = np.linspace(lo, hi, 200)[1:-1]
            values = oracles.appd_values(theta, theta_i, 0.0, phi)
            lower = np.minimum(values.d_dfn_1, values.d_dfn_2)
            upper = np.maximum(values.d_dfn_1, values.d_dfn_2)
            self.assertTrue(np.all(values.d_numerator >= lower - 1e-12), f"theta_i = {k}pi/120")
            self.assertTrue(np.all(values.d_numerator <= upper + 1e-12), f"theta_i = {k}pi/120")


if __name__ == "__main__":
    unittest.main()
