import unittest

import numpy as np

from wvnn.wvnncontour import BoundaryCurve, boundary_curves, level_curves
from wvnn.wvnnstates import HALF_PI, pauli
from wvnn.wvnnsweep import GridSpec, state_grid_sweep
from wvnn.wvnntable import SweepTable


class TestLevelCurves(unittest.TestCase):
    def setUp(self):
        self.x = np.linspace(-1.5, 1.5, 61)
        self.y = np.linspace(-1.5, 1.5, 61)
        xx, yy = np.meshgrid(self.x, self.y, indexing="ij")
        self.z = xx**2 + yy**2

    def test_circle_is_closed(self):
        curves = level_curves(self.x, self.y, self.z, 1.0)
        self.assertEqual(len(curves), 1)
        curve = curves[0]
        self.assertTrue(curve.closed)
        self.assertEqual(curve.points[0], curve.points[-1])
        radii = [np.hypot(px, py) for px, py in curve.points]
        self.assertLess(max(abs(r - 1.0) for r in radii), 2e-3)

    def test_level_outside_range(self):
        self.assertEqual(level_curves(self.x, self.y, self.z, 10.0), [])
        self.assertEqual(level_curves(self.x, self.y, np.full_like(self.z, np.nan), 1.0), [])

    def test_gaps_open_the_curve(self):
        z = self.z.copy()
        z[30, 45:] = np.nan
        curves = level_curves(self.x, self.y, z, 1.0)
        self.assertTrue(curves)
        self.assertFalse(any(c.closed for c in curves))

    def test_quarter_circle_ends_on_the_border(self):
        x = np.linspace(0.0, 1.5, 31)
        xx, yy = np.meshgrid(x, x, indexing="ij")
        curves = level_curves(x, x, xx**2 + yy**2, 1.0)
        self.assertEqual(len(curves), 1)
        self.assertFalse(curves[0].closed)
        ends = sorted([curves[0].points[0], curves[0].points[-1]])
        self.assertAlmostEqual(ends[0][0], 0.0, delta=1e-12)
        self.assertAlmostEqual(ends[1][1], 0.0, delta=1e-12)

    def test_to_dict(self):
        curve = BoundaryCurve(1.0, [(0.0, 1.0), (1.0, 0.0)])
        self.assertEqual(len(curve), 2)
        self.assertEqual(curve.to_dict(), {"level": 1.0, "closed": False, "points": [[0.0, 1.0], [1.0, 0.0]]})


class TestBoundaryCurves(unittest.TestCase):
    def test_sigma_x_amplification_border(self):
        t = state_grid_sweep(GridSpec(pauli("x"), (0.0, HALF_PI, 40), (0.0, HALF_PI, 40)))
        curves = boundary_curves(t, 1.0)
        self.assertTrue(curves)
        # the zero-phase sigma_x border is the cross theta_i = pi/4, theta_f = pi/4
        for curve in curves:
            for theta_i, theta_f in curve.points:
                self.assertAlmostEqual(abs(np.sin(theta_f + theta_i) / np.cos(theta_f - theta_i)), 1.0, delta=2e-2)

    def test_needs_two_axes(self):
        t = SweepTable("line", "pauli-x", {"theta": [0.0, 1.0]})
        t.add_field("wv_abs", [0.5, 1.5])
        with self.assertRaises(ValueError):
            boundary_curves(t, 1.0)


if __name__ == "__main__":
    unittest.main()
