# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

import tempfile
import unittest
from pathlib import Path

import numpy as np

from lrsense.orchestrator.evaluators.quantitative import emit_plot_data, summarize
from lrsense.orchestrator.experiment import TrialRecord
from lrsense.utils.status import DomainError


def make_record(m, r, trial, spectral, ratio, converged=True):
    return TrialRecord(
        m=m,
        r=r,
        n=5 * m * r,
        trial=trial,
        seed=trial,
        lam=1.0,
        rho=float(5 * m * r),
        iterations=10,
        converged=converged,
        spectral_error=spectral,
        frobenius_error=spectral,
        nuclear_error=spectral,
        ratio_spectral=ratio,
        lambda_ge_2W=True,
        cone_ok=True,
        wall_time_ms=0.0,
        kyfan_errors={1: spectral},
        schatten_errors={"inf": spectral},
        spectral_ok=True,
        nuclear_ok=trial % 2 == 0,
        kyfan_ok=True,
        schatten_ok=True,
        dantzig_feasible=True,
        cone_ratio=0.5,
    )


def nine_records():
    return [
        make_record(40, r, t, spectral=0.01 * r + 0.001 * t, ratio=8.0 + t, converged=t != 2)
        for r in (3, 5, 7)
        for t in range(3)
    ]


class TestSummarize(unittest.TestCase):
    def test_groups_by_cell(self):
        summary = summarize(nine_records())
        self.assertEqual(list(summary["r"]), [3, 5, 7])
        self.assertEqual(list(summary["trials"]), [3, 3, 3])
        self.assertEqual(list(summary["n"]), [600, 1000, 1400])
        self.assertAlmostEqual(float(summary["mean_ratio_spectral"].iloc[0]), 9.0)
        self.assertAlmostEqual(float(summary["converged_rate"].iloc[0]), 2 / 3)
        self.assertAlmostEqual(float(summary["nuclear_ok_rate"].iloc[0]), 2 / 3)


class TestEmitPlotData(unittest.TestCase):
    def test_files_and_rows(self):
        with tempfile.TemporaryDirectory() as tmp:
            written = emit_plot_data(nine_records(), tmp)
            names = sorted(path.name for path in written)
            self.assertEqual(names, ["fig1_accuracy_m40.dat", "fig1_ratio_m40.dat"])

            lines = (Path(tmp) / "fig1_ratio_m40.dat").read_text().splitlines()
            self.assertTrue(lines[0].startswith("# r"))
            rows = [line.split() for line in lines[1:]]
            self.assertEqual(len(rows), 3)
            self.assertEqual([row[0] for row in rows], ["3", "5", "7"])
            self.assertAlmostEqual(float(rows[0][1]), 9.0)
            self.assertAlmostEqual(float(rows[0][2]), float(np.std([8.0, 9.0, 10.0])))

            accuracy = (Path(tmp) / "fig1_accuracy_m40.dat").read_text().splitlines()
            self.assertEqual(len(accuracy), 4)
            self.assertAlmostEqual(float(accuracy[2].split()[1]), 0.051)

    def test_prefix_and_multiple_sides(self):
        records = [make_record(m, 3, t, 0.1, 9.0) for m in (40, 50) for t in range(2)]
        with tempfile.TemporaryDirectory() as tmp:
            written = emit_plot_data(records, tmp, prefix="fig2")
            self.assertEqual(len(written), 4)
            self.assertTrue((Path(tmp) / "fig2_accuracy_m50.dat").exists())
            single = (Path(tmp) / "fig2_ratio_m50.dat").read_text().splitlines()[1].split()
            self.assertEqual(float(single[2]), 0.0)

    def test_empty_records(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(DomainError):
                emit_plot_data([], tmp)
            self.assertEqual(list(Path(tmp).iterdir()), [])


if __name__ == "__main__":
    unittest.main()
