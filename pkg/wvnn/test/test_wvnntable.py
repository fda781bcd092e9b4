import os
import tempfile
import unittest

import numpy as np

from wvnn.wvnnerrors import NotFoundError, UsageError
from wvnn.wvnnstates import HALF_PI, pauli
from wvnn.wvnnsweep import GridSpec, observable_sweep, state_grid_sweep
from wvnn.wvnntable import (
    SweepTable,
    get_safe_filename,
    list_table_files_from_path,
    load_table_from_csv,
    load_table_from_json,
    save_curves_to_json,
    save_table,
)


def sigma_x_table():
    return state_grid_sweep(GridSpec(pauli("x"), (0.0, HALF_PI, 5), (0.0, HALF_PI, 4), sweep_id="grid test"))


class TestSweepTable(unittest.TestCase):
    def test_frame_layout(self):
        t = sigma_x_table()
        frame = t.to_frame()
        self.assertEqual(len(frame), 20)
        self.assertEqual(list(frame.columns[:3]), ["theta_i", "theta_f", "wv_abs"])
        # row-major, theta_f varies fastest
        self.assertEqual(frame["theta_i"].iloc[1], 0.0)
        self.assertAlmostEqual(frame["theta_f"].iloc[1], HALF_PI / 3)

    def test_field_shape_and_lookup(self):
        t = SweepTable("t", "pauli-x", {"a": [0, 1], "b": [0, 1, 2]})
        with self.assertRaises(ValueError):
            t.add_field("f", np.zeros((3, 2)))
        t.add_field("f", np.zeros((2, 3)))
        self.assertEqual(t.columns, ["a", "b", "f"])
        with self.assertRaises(NotFoundError):
            t.field("g")
        with self.assertRaises(NotFoundError):
            t.axis("c")

    def test_file_stem_is_deterministic(self):
        a, b = sigma_x_table(), sigma_x_table()
        self.assertEqual(a.file_stem(), b.file_stem())
        self.assertTrue(a.file_stem().startswith("grid_test__pauli-x__"))
        other = state_grid_sweep(GridSpec(pauli("x"), (0.0, HALF_PI, 6), (0.0, HALF_PI, 4), sweep_id="grid test"))
        self.assertNotEqual(a.params_hash(), other.params_hash())

    def test_safe_filename(self):
        self.assertEqual(get_safe_filename("fig 2/../x:y"), "fig_2..xy")


class TestTableFiles(unittest.TestCase):
    def test_csv_reload(self):
        t = sigma_x_table()
        with tempfile.TemporaryDirectory() as folder:
            path = save_table(t, "csv", folder)
            with open(path, encoding="utf-8") as f:
                head = f.readline()
            self.assertTrue(head.startswith("# sweep_id: grid test"))
            loaded = load_table_from_csv(path)
        self.assertEqual(loaded.sweep_id, "grid test")
        self.assertEqual(list(loaded.axes), ["theta_i", "theta_f"])
        self.assertEqual(loaded.meta["gap_count"], t.meta["gap_count"])
        np.testing.assert_array_equal(loaded.field("class_code"), t.field("class_code"))
        np.testing.assert_array_equal(loaded.field("wv_abs"), t.field("wv_abs"))

    def test_json_reload(self):
        t = observable_sweep([0.3, 1.0], np.pi / 4, steps=20)
        with tempfile.TemporaryDirectory() as folder:
            path = save_table(t, "json", folder)
            self.assertTrue(path.endswith(".json"))
            loaded = load_table_from_json(path)
        self.assertEqual(loaded.shape, (2, 20))
        self.assertEqual(loaded.meta["windows"], t.meta["windows"])
        np.testing.assert_allclose(loaded.field("theta"), t.field("theta"), rtol=0, atol=0)

    def test_identical_runs_write_identical_files(self):
        with tempfile.TemporaryDirectory() as folder:
            first = save_table(sigma_x_table(), "csv", os.path.join(folder, "a"))
            second = save_table(sigma_x_table(), "csv", os.path.join(folder, "b"))
            with open(first, "rb") as f1, open(second, "rb") as f2:
                self.assertEqual(f1.read(), f2.read())

    def test_unknown_format_and_missing_file(self):
        with self.assertRaises(UsageError):
            save_table(sigma_x_table(), "xlsx")
        with self.assertRaises(NotFoundError):
            load_table_from_csv("/nonexistent/table.csv")
        with self.assertRaises(NotFoundError):
            load_table_from_json("/nonexistent/table.json")

    def test_curves_and_listing(self):
        t = sigma_x_table()
        with tempfile.TemporaryDirectory() as folder:
            save_table(t, "csv", folder)
            path = save_curves_to_json(t, {"1": [{"level": 1.0, "closed": False, "points": []}]}, folder)
            self.assertTrue(path.endswith("__curves.json"))
            files = list_table_files_from_path(folder)
            self.assertEqual(len(files), 2)
            self.assertEqual(files[0].path, sorted(f.path for f in files)[0])
            self.assertIn(" - ", str(files[0]))
            self.assertEqual(sorted(f.kind for f in files), ["curves", "table"])
            self.assertEqual(set(files[0].to_dict()), {"name", "path", "kind", "size"})


if __name__ == "__main__":
    unittest.main()
