# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

import json
import os
import sys
import tempfile
import unittest
from pathlib import Path
from unittest import mock

import pandas as pd
from rich.console import Console

from lrsense.linalg.matcore import spectral_norm
from lrsense.orchestrator.experiment import ExperimentConfig, ground_truth, run_trial
from lrsense.orchestrator.orchestrator import Orchestrator, print_summary, run_experiment
from lrsense.session import ExperimentSession
from lrsense.utils.rng import derive_seed


def grid_config(**overrides):
    settings = {
        "name": "grid",
        "m_values": [6],
        "r_values": [1, 2],
        "trials": 2,
        "sigma_xi": 0.01,
        "admm": {"max_iterations": 150},
        "record_wall_time": False,
    }
    settings.update(overrides)
    return ExperimentConfig(**settings)


@mock.patch.dict(os.environ, {"USE_WANDB": "false"})
class TestOrchestrator(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def run_quietly(self, config, results_dir):
        orchestrator = Orchestrator(results_dir=results_dir)
        orchestrator.tprint.enable_printing = False
        return orchestrator.run_experiment(config)

    def test_writes_artifacts(self):
        config = grid_config()
        records = self.run_quietly(config, self.dir)
        self.assertEqual([(rec.m, rec.r, rec.trial) for rec in records], config.cells())

        table = pd.read_csv(self.dir / "grid.csv", dtype=str, keep_default_na=False)
        self.assertEqual(list(table.columns), config.csv_columns())
        self.assertEqual(len(table), 4)
        self.assertEqual(list(table.iloc[0, :4]), ["6", "1", "30", "0"])

        self.assertTrue((self.dir / "fig1_accuracy_m6.dat").exists())
        self.assertTrue((self.dir / "fig1_ratio_m6.dat").exists())
        with open(self.dir / "grid_summary.json") as f:
            summary = json.load(f)
        self.assertEqual(summary["name"], "grid")
        self.assertEqual(len(summary["summary"]), 2)

    def test_byte_identical_across_worker_counts(self):
        serial, parallel = self.dir / "serial", self.dir / "parallel"
        self.run_quietly(grid_config(workers=1), serial)
        self.run_quietly(grid_config(workers=3), parallel)
        self.assertEqual((serial / "grid.csv").read_bytes(), (parallel / "grid.csv").read_bytes())
        self.assertEqual(
            (serial / "fig1_ratio_m6.dat").read_bytes(), (parallel / "fig1_ratio_m6.dat").read_bytes()
        )

    def test_rademacher_prefix(self):
        self.run_quietly(grid_config(ensemble_kind="rademacher", r_values=[1], trials=1), self.dir)
        self.assertTrue((self.dir / "fig2_accuracy_m6.dat").exists())

    def test_output_dir_from_config(self):
        config = grid_config(r_values=[1], trials=1, output_dir=self.dir / "configured")
        self.run_quietly(config, None)
        self.assertTrue((self.dir / "configured" / "grid.csv").exists())

    def test_init_from_preset(self):
        session = Orchestrator(results_dir=self.dir).init_experiment("fig2-desk")
        self.assertEqual(session.config.name, "fig2-desk")
        self.assertEqual(session.csv_path, self.dir / "fig2-desk.csv")

    def test_noiseless_preset(self):
        orchestrator = Orchestrator(results_dir=self.dir)
        orchestrator.tprint.enable_printing = False
        records = orchestrator.run_experiment("noiseless-smoke")
        self.assertEqual(len(records), 1)
        record = records[0]
        A0 = ground_truth(8, 2, derive_seed(record.seed, 1))
        self.assertLessEqual(record.spectral_error, 1e-3 * spectral_norm(A0))

    def test_wandb_logging(self):
        fake = mock.MagicMock()
        with mock.patch.dict(os.environ, {"USE_WANDB": "true"}), mock.patch.dict(sys.modules, {"wandb": fake}):
            self.run_quietly(grid_config(r_values=[1], trials=1), self.dir)
        fake.init.assert_called_once()
        fake.finish.assert_called_once()
        self.assertGreaterEqual(fake.log.call_count, 2)

    def test_module_level_helpers(self):
        with mock.patch("lrsense.orchestrator.orchestrator.TrialPrint") as printer:
            printer.return_value.trial = mock.MagicMock()
            records = run_experiment(grid_config(r_values=[1], trials=1), results_dir=self.dir)
        console = Console(record=True, width=200)
        print_summary(records, console, title="unit")
        self.assertIn("unit", console.export_text())


class TestExperimentSession(unittest.TestCase):
    def test_header_before_rows(self):
        with tempfile.TemporaryDirectory() as tmp:
            session = ExperimentSession(grid_config(), results_dir=tmp)
            session.start()
            session.end()
            self.assertEqual(
                session.csv_path.read_text().strip().split(","), grid_config().csv_columns()
            )
            self.assertGreaterEqual(session.get_duration(), 0.0)
            self.assertEqual(session.to_dict()["summary"], [])

    def test_rows_follow_header(self):
        with tempfile.TemporaryDirectory() as tmp:
            config = grid_config(r_values=[1], trials=2)
            session = ExperimentSession(config, results_dir=tmp)
            session.start()
            for trial in range(2):
                session.add(run_trial(config, 6, 1, trial))
            session.end()
            frame = pd.read_csv(session.csv_path)
            self.assertEqual(list(frame.columns), config.csv_columns())
            self.assertEqual(list(frame["trial"]), [0, 1])
            self.assertEqual(list(frame["seed"].astype(str)), [str(record.seed) for record in session.records])


if __name__ == "__main__":
    unittest.main()
