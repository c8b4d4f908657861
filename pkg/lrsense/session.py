# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

"""Session wrapper that records one experiment run: CSV rows, summary and tracking."""

import json
import time
import uuid
from pathlib import Path

import pandas as pd

from lrsense.orchestrator.evaluators.quantitative import summarize
from lrsense.orchestrator.experiment import ExperimentConfig, TrialRecord
from lrsense.paths import RESULTS_DIR
from lrsense.utils.critical_section import append_rows, write_header


class ExperimentSession:
    def __init__(self, config: ExperimentConfig, results_dir=None) -> None:
        self.session_id = uuid.uuid4()
        self.config = config
        self.records: list[TrialRecord] = []
        self.start_time = None
        self.end_time = None
        if results_dir:
            self.results_dir = Path(results_dir)
        elif config.output_dir:
            self.results_dir = Path(config.output_dir)
        else:
            self.results_dir = RESULTS_DIR / config.name
        self.csv_path = self.results_dir / f"{config.name}.csv"
        self.columns = config.csv_columns()

    def start(self):
        """Start the session and write the CSV header."""
        self.start_time = time.time()
        self.results_dir.mkdir(parents=True, exist_ok=True)
        write_header(self.csv_path, self.columns)

    def add(self, record: TrialRecord):
        """Append a record and its CSV row.

        Args:
            record (TrialRecord): The finished trial.
        """
        self.records.append(record)
        append_rows(self.csv_path, pd.DataFrame([record.to_row(self.columns)], columns=self.columns))

    def end(self):
        """End the session."""
        self.end_time = time.time()

    def get_duration(self) -> float:
        return self.end_time - self.start_time

    def to_dict(self):
        summary = summarize(self.records).to_dict(orient="records") if self.records else []
        return {
            "session_id": str(self.session_id),
            "name": self.config.name,
            "start_time": self.start_time,
            "end_time": self.end_time,
            "config": self.config.model_dump(mode="json"),
            "csv": str(self.csv_path),
            "summary": summary,
        }

    def to_json(self):
        """Save the session summary next to the CSV file."""
        self.results_dir.mkdir(parents=True, exist_ok=True)
        with open(self.results_dir / f"{self.config.name}_summary.json", "w") as f:
            json.dump(self.to_dict(), f, indent=4, default=str)

    def to_wandb(self):
        """Log every record and the summary to Weights & Biases."""
        import wandb

        for record in self.records:
            wandb.log(record.model_dump(by_alias=True, exclude={"kyfan_errors", "schatten_errors"}))
        wandb.log({"summary": self.to_dict()["summary"]})
