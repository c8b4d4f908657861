# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

"""Aggregations over trial records: summaries and plot-data series."""

from pathlib import Path

import pandas as pd

from lrsense.utils.status import DomainError

PLOT_SERIES = {
    "accuracy": ("spectral_error", "mean_spectral_error"),
    "ratio": ("ratio_spectral", "mean_ratio_spectral"),
}


def records_frame(records) -> pd.DataFrame:
    """One row per trial record (aliases as column names)."""
    return pd.DataFrame([record.model_dump(by_alias=True) for record in records])


def summarize(records) -> pd.DataFrame:
    """Per ``(m, r)`` means and success rates."""
    frame = records_frame(records)
    grouped = frame.groupby(["m", "r"], sort=True)
    return grouped.agg(
        n=("n", "first"),
        trials=("trial", "count"),
        mean_spectral_error=("spectral_error", "mean"),
        mean_ratio_spectral=("ratio_spectral", "mean"),
        converged_rate=("converged", "mean"),
        cone_ok_rate=("cone_ok", "mean"),
        lambda_ge_2W_rate=("lambda_ge_2W", "mean"),
        spectral_ok_rate=("spectral_ok", "mean"),
        nuclear_ok_rate=("nuclear_ok", "mean"),
        kyfan_ok_rate=("kyfan_ok", "mean"),
    ).reset_index()


def emit_plot_data(records, output_dir, prefix: str = "fig1") -> list[Path]:
    """Write whitespace-delimited ``r mean std`` series per m.

    Files are ``{prefix}_accuracy_m{M}.dat`` (spectral error) and
    ``{prefix}_ratio_m{M}.dat`` (ratio to sigma sqrt(m/n)); std is the
    population standard deviation over trials.

    Raises:
        DomainError: If ``records`` is empty (nothing is written).
    """
    if not records:
        raise DomainError("records", 0, "at least one record is required")
    frame = records_frame(records)
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)

    written = []
    for m, group in frame.groupby("m", sort=True):
        for series, (column, header) in PLOT_SERIES.items():
            stats = group.groupby("r", sort=True)[column].agg(
                mean="mean", std=lambda values: values.std(ddof=0)
            )
            path = output_dir / f"{prefix}_{series}_m{m}.dat"
            with open(path, "w", encoding="utf-8", newline="") as f:
                f.write(f"# r {header} std\n")
                stats.to_csv(f, sep=" ", header=False, lineterminator="\n")
            written.append(path)
    return written
