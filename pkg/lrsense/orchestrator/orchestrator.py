# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

"""Orchestrator that runs an experiment grid and writes its artifacts."""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from functools import partial

from rich.console import Console
from rich.table import Table

from lrsense.orchestrator.evaluators.quantitative import emit_plot_data, summarize
from lrsense.orchestrator.experiment import ExperimentConfig, TrialRecord, run_trial
from lrsense.orchestrator.presets.registry import PresetRegistry
from lrsense.sensing.container import EnsembleCache
from lrsense.sensing.ensemble import EnsembleKind
from lrsense.session import ExperimentSession
from lrsense.utils.status import TrialPrint

logger = logging.getLogger(__name__)

PLOT_PREFIXES = {EnsembleKind.GAUSSIAN: "fig1", EnsembleKind.RADEMACHER: "fig2"}


def summary_table(records: list[TrialRecord], title: str = "Summary") -> Table:
    table = Table(title=title)
    for column in ["m", "r", "n", "trials", "mean spectral", "mean ratio", "converged", "cone ok", "bounds ok"]:
        table.add_column(column, justify="right")
    for row in summarize(records).itertuples(index=False):
        bounds = min(row.spectral_ok_rate, row.nuclear_ok_rate, row.kyfan_ok_rate)
        table.add_row(
            str(row.m),
            str(row.r),
            str(row.n),
            str(row.trials),
            f"{row.mean_spectral_error:.4e}",
            f"{row.mean_ratio_spectral:.3f}",
            f"{row.converged_rate:.0%}",
            f"{row.cone_ok_rate:.0%}",
            f"{bounds:.0%}",
        )
    return table


class Orchestrator:
    def __init__(self, results_dir=None):
        self.session = None
        self.presets = PresetRegistry()
        self.tprint = TrialPrint()
        self.use_wandb = os.getenv("USE_WANDB", "false").lower() == "true"
        self.results_dir = results_dir

    def init_experiment(self, config_or_preset) -> ExperimentSession:
        """Create the session for a config object or a preset id.

        Args:
            config_or_preset (ExperimentConfig | str): The experiment to run.

        Returns:
            ExperimentSession: The new (not yet started) session.
        """
        if isinstance(config_or_preset, str):
            config = self.presets.get_preset(config_or_preset)
        else:
            config = config_or_preset
        self.session = ExperimentSession(config, results_dir=self.results_dir)
        logger.info(f"Session {self.session.session_id}: {len(config.cells())} trials -> {self.session.csv_path}")
        return self.session

    def run_experiment(self, config_or_preset) -> list[TrialRecord]:
        """Run every ``(m, r, trial)`` cell and write CSV, plot data and summary.

        Trials run in a thread pool; rows are written in grid order.
        """
        session = self.init_experiment(config_or_preset)
        config = session.config
        cache = EnsembleCache() if config.cache_ensembles else None
        trial = partial(self._run_cell, config, cache)

        if self.use_wandb:
            import wandb

            wandb.init(project="lrsense", name=config.name, config=config.model_dump(mode="json"))

        session.start()
        try:
            with ThreadPoolExecutor(max_workers=config.workers) as pool:
                for record in pool.map(trial, config.cells()):
                    session.add(record)
                    self.tprint.trial(record)
        finally:
            session.end()

        emit_plot_data(session.records, session.results_dir, prefix=PLOT_PREFIXES[config.ensemble_kind])
        session.to_json()
        if self.use_wandb:
            session.to_wandb()
            wandb.finish()
        return session.records

    @staticmethod
    def _run_cell(config: ExperimentConfig, cache, cell) -> TrialRecord:
        m, r, trial = cell
        return run_trial(config, m, r, trial, cache=cache)


def run_experiment(config: ExperimentConfig, results_dir=None) -> list[TrialRecord]:
    return Orchestrator(results_dir=results_dir).run_experiment(config)


def print_summary(records: list[TrialRecord], console: Console = None, title: str = "Summary"):
    console = console or Console()
    console.print(summary_table(records, title=title))
