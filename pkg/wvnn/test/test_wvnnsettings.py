import logging
import os
import unittest
from unittest.mock import patch

from wvnn.wvnnsettings import DEFAULT_CLASSIFY_TOL, DEFAULT_OVERLAP_FLOOR, WVNNSettings, str_to_bool


class TestSettings(unittest.TestCase):
    def test_defaults(self):
        with patch.dict(os.environ, {}, clear=True):
            s = WVNNSettings()
            self.assertEqual(s.get_log_level(), logging.INFO)
            self.assertEqual(s.overlap_floor, DEFAULT_OVERLAP_FLOOR)
            self.assertEqual(s.classify_tol, DEFAULT_CLASSIFY_TOL)
            self.assertEqual(s.data_dir(), "data")
            self.assertTrue(s.colored_logs())
            self.assertGreaterEqual(s.threads, 1)

    def test_environment(self):
        env = {
            "WVNN_LOG_LEVEL": "debug",
            "WVNN_THREADS": "3",
            "WVNN_OVERLAP_FLOOR": "1e-10",
            "WVNN_CLASSIFY_TOL": "1e-6",
            "WVNN_DATA_DIR": "/tmp/wvnn",
            "WVNN_COLOR_LOGS": "off",
        }
        with patch.dict(os.environ, env, clear=True):
            s = WVNNSettings()
            self.assertEqual(s.get_log_level(), logging.DEBUG)
            self.assertEqual(s.threads, 3)
            self.assertEqual(s.overlap_floor, 1e-10)
            self.assertEqual(s.classify_tol, 1e-6)
            self.assertEqual(s.data_dir(), "/tmp/wvnn")
            self.assertFalse(s.colored_logs())

    def test_malformed_environment_falls_back(self):
        with patch.dict(os.environ, {"WVNN_THREADS": "many", "WVNN_OVERLAP_FLOOR": "tiny"}, clear=True):
            s = WVNNSettings()
            self.assertGreaterEqual(s.threads, 1)
            self.assertEqual(s.overlap_floor, DEFAULT_OVERLAP_FLOOR)

    def test_setters(self):
        with patch.dict(os.environ, {}, clear=True):
            s = WVNNSettings()
            s.set_threads(2)
            s.set_overlap_floor(1e-8)
            s.set_classify_tol(0.0)
            self.assertEqual((s.threads, s.overlap_floor, s.classify_tol), (2, 1e-8, 0.0))
            with self.assertRaises(ValueError):
                s.set_overlap_floor(-1.0)
            with self.assertRaises(ValueError):
                s.set_classify_tol(-1e-9)
            s.reset()
            self.assertEqual(s.overlap_floor, DEFAULT_OVERLAP_FLOOR)

    def test_str_to_bool(self):
        for text in ("true", "1", "YES", "on"):
            self.assertTrue(str_to_bool(text))
        for text in ("false", "0", "", "nope"):
            self.assertFalse(str_to_bool(text))


if __name__ == "__main__":
    unittest.main()
