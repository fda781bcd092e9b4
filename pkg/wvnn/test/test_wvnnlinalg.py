import unittest

import numpy as np
from hypothesis import given, settings as hypothesis_settings, strategies as st

from wvnn.wvnnerrors import DegenerateInputError, IterationFailureError, UnsupportedDimensionError
from wvnn.wvnnlinalg import (
    adjoint,
    as_cmatrix,
    eigvals,
    eigvals_closed,
    eigvals_qr,
    frobenius_norm,
    match_spectra,
    normality_defect,
    quadratic_roots,
    sort_spectrum,
)
from wvnn.wvnnstates import PAULI

JORDAN = np.array([[0, 1], [0, 0]], dtype=complex)


def random_matrix(rng, n):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


class TestLinalg(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(7)

    def test_frobenius_norm(self):
        self.assertAlmostEqual(frobenius_norm(np.eye(2)), np.sqrt(2), places=15)
        self.assertEqual(frobenius_norm(JORDAN), 1.0)
        m = random_matrix(self.rng, 3)
        brute = np.sqrt(sum(abs(m[i, j]) ** 2 for i in range(3) for j in range(3)))
        self.assertAlmostEqual(frobenius_norm(m), brute, delta=1e-14 * brute)

    def test_adjoint(self):
        np.testing.assert_array_equal(adjoint(PAULI["y"]), PAULI["y"])
        np.testing.assert_array_equal(adjoint(JORDAN), [[0, 0], [1, 0]])
        m = random_matrix(self.rng, 4)
        np.testing.assert_array_equal(adjoint(adjoint(m)), m)

    def test_normality_defect(self):
        self.assertEqual(normality_defect(PAULI["x"]), 0.0)
        self.assertAlmostEqual(normality_defect(JORDAN), np.sqrt(2), places=14)
        cyclic = np.roll(np.eye(3), 1, axis=0)
        self.assertLess(normality_defect(cyclic), 1e-15)

    def test_as_cmatrix_rejects_bad_input(self):
        with self.assertRaises(DegenerateInputError):
            as_cmatrix(np.ones((2, 3)))
        with self.assertRaises(DegenerateInputError):
            as_cmatrix([[np.nan, 0], [0, 1]])

    def test_quadratic_roots_larger_first(self):
        r1, r2 = quadratic_roots(3, 2)
        self.assertAlmostEqual(r1, 2)
        self.assertAlmostEqual(r2, 1)

    def test_eigvals_closed_examples(self):
        self.assertEqual(eigvals_closed(np.diag([1, -1])), [-1, 1])
        spectrum = eigvals_closed(PAULI["y"])
        self.assertLess(match_spectra(spectrum, [1, -1]), 1e-14)
        self.assertEqual(eigvals_closed(JORDAN), [0, 0])

    def test_eigvals_closed_cubic(self):
        m = np.diag([3.0, -1.0, 0.5]) + 0j
        self.assertLess(match_spectra(eigvals_closed(m), [3, -1, 0.5]), 1e-12)
        m = random_matrix(self.rng, 3)
        values = eigvals_closed(m)
        self.assertAlmostEqual(sum(values), np.trace(m), delta=1e-12 * frobenius_norm(m))

    def test_eigvals_closed_triple_root(self):
        defective = np.array([[2, 1, 0], [0, 2, 0], [0, 0, 2]], dtype=complex)
        self.assertLess(match_spectra(eigvals_closed(defective), [2, 2, 2]), 1e-12)
        self.assertLess(match_spectra(eigvals_closed(np.eye(3) * -0.5), [-0.5, -0.5, -0.5]), 1e-12)
        jordan = np.diag([1.0, 1.0], 1) + 0j
        self.assertLess(match_spectra(eigvals_closed(jordan), [0, 0, 0]), 1e-12)

    def test_eigvals_closed_rejects_other_dimensions(self):
        with self.assertRaises(UnsupportedDimensionError):
            eigvals_closed(np.eye(4))

    def test_eigvals_qr_examples(self):
        self.assertLess(match_spectra(eigvals_qr(np.diag([1.0, 2.0, 3.0, 4.0])), [1, 2, 3, 4]), 1e-12)
        for _ in range(20):
            m = random_matrix(self.rng, 3)
            self.assertLess(match_spectra(eigvals_qr(m), eigvals_closed(m)), 1e-10 * frobenius_norm(m))

    def test_eigvals_qr_rank_one(self):
        u = self.rng.normal(size=5) + 1j * self.rng.normal(size=5)
        v = self.rng.normal(size=5) + 1j * self.rng.normal(size=5)
        m = np.outer(u, v.conj())
        expected = [np.vdot(v, u), 0, 0, 0, 0]
        self.assertLess(match_spectra(eigvals_qr(m), expected), 1e-10 * frobenius_norm(m))

    def test_eigvals_qr_iteration_failure(self):
        with self.assertRaises(IterationFailureError) as context:
            eigvals_qr(random_matrix(self.rng, 6), max_iter=0)
        self.assertEqual(context.exception.iterations, 0)
        self.assertGreater(context.exception.active_block, 2)

    def test_one_by_one(self):
        self.assertEqual(eigvals_qr([[2 + 1j]]), [2 + 1j])

    def test_trace_and_conjugate_spectrum(self):
        for n in range(2, 7):
            m = random_matrix(self.rng, n)
            values = eigvals(m)
            scale = frobenius_norm(m)
            self.assertAlmostEqual(sum(values), np.trace(m), delta=1e-10 * scale)
            conj = [v.conjugate() for v in eigvals(adjoint(m))]
            self.assertLess(match_spectra(values, conj), 1e-10 * scale)

    def test_sort_spectrum_is_lexicographic(self):
        self.assertEqual(sort_spectrum([1j, -1, 0, -1j]), [-1, -1j, 0, 1j])

    def test_match_spectra_size_mismatch(self):
        with self.assertRaises(DegenerateInputError):
            match_spectra([1, 2], [1])

    @hypothesis_settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=2, max_value=6), st.integers(min_value=0, max_value=2**32 - 1))
    def test_schur_inequality(self, n, seed):
        m = random_matrix(np.random.default_rng(seed), n)
        gap = frobenius_norm(m) ** 2 - sum(abs(v) ** 2 for v in eigvals(m))
        self.assertGreaterEqual(gap, -1e-10 * frobenius_norm(m) ** 2)

    def test_normal_families(self):
        q, _ = np.linalg.qr(random_matrix(self.rng, 4))
        h = random_matrix(self.rng, 4)
        h = h + adjoint(h)
        for m in (q, h):
            self.assertLess(normality_defect(m), 1e-12 * max(1.0, frobenius_norm(m) ** 2))
        self.assertGreater(normality_defect(np.diag(np.ones(3), 1)), 1.0)


if __name__ == "__main__":
    unittest.main()
