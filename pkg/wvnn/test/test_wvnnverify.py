import json
import unittest

import numpy as np

from wvnn.wvnnerrors import UsageError
from wvnn.wvnnverify import CHECKS, LADDER_THETA_I, Worst, derivative_ordering_excess, run_checks

QUICK = ["route_equivalence", "henrici_identity", "rank_one_structure", "sigma_y_identity"]


class TestVerify(unittest.TestCase):
    def test_quick_checks_pass(self):
        report = run_checks(seed=1, scale=0.1, only=QUICK)
        self.assertEqual([r.name for r in report.results], QUICK)
        for result in report.results:
            self.assertTrue(result.passed, result.detail)
            self.assertLessEqual(result.max_error, result.tolerance)
            self.assertIsNone(result.failing_case)
        self.assertTrue(report.passed)

    def test_full_suite_at_reduced_scale(self):
        report = run_checks(scale=0.1)
        self.assertEqual(len(report.results), len(CHECKS))
        failed = [r.name for r in report.results if not r.passed]
        self.assertEqual(failed, [], report.to_text())

    def test_derivative_ordering_on_ladder(self):
        report = run_checks(only=["derivative_ordering"])
        self.assertTrue(report.passed, report.to_text())
        excess = derivative_ordering_excess(LADDER_THETA_I[0], np.pi / 12)
        self.assertEqual(len(excess), 198)
        self.assertTrue(np.all(excess <= 1e-12))

    def test_same_seed_same_report(self):
        first = run_checks(seed=5, scale=0.1, only=["route_equivalence"]).to_dict()
        second = run_checks(seed=5, scale=0.1, only=["route_equivalence"]).to_dict()
        first["checks"][0].pop("seconds")
        second["checks"][0].pop("seconds")
        self.assertEqual(first, second)

    def test_injected_fault(self):
        report = run_checks(scale=0.1, only=["route_equivalence"], inject_fault="route_equivalence")
        self.assertFalse(report.passed)
        result = report.results[0]
        self.assertGreater(result.max_error, result.tolerance)
        self.assertIsNotNone(result.failing_case)
        self.assertIn("FAIL route_equivalence", report.to_text())
        self.assertIn("failing case", report.to_text())
        data = json.loads(json.dumps(report.to_dict()))
        self.assertFalse(data["passed"])

    def test_bad_arguments(self):
        with self.assertRaises(UsageError):
            run_checks(only=["no_such_check"])
        with self.assertRaises(UsageError):
            run_checks(inject_fault="no_such_check")
        with self.assertRaises(UsageError):
            run_checks(scale=0.0)

    def test_worst_keeps_largest_ratio(self):
        worst = Worst()
        self.assertFalse(worst.passed)
        worst.update(1e-12, 1e-10, {"k": 1})
        worst.update(5e-11, 1e-10, {"k": 2})
        worst.update(1e-6, 1e-3, {"k": 3})
        self.assertEqual(worst.case, {"k": 2})
        self.assertTrue(worst.passed)
        worst.update(float("nan"), 1.0, {"k": 4})
        self.assertEqual(worst.case, {"k": 4})
        self.assertFalse(worst.passed)


if __name__ == "__main__":
    unittest.main()
