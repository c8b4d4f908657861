# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

"""Interrupt-safe appends to result tables.

A results CSV is read while a long grid is still running, and Ctrl+C must
never leave a half-written row behind.
"""

import logging
import os
import signal
import threading
from pathlib import Path

import pandas as pd

logger = logging.getLogger(__name__)


class DeferredInterrupt:
    """Hold SIGINT until the block ends, then raise ``KeyboardInterrupt``.

    Args:
        target (str): What is being written, named in the log message.
    """

    def __init__(self, target: str = "results"):
        self.target = target
        self.signaled = 0

    def __enter__(self):
        self.signaled = 0
        # signal.signal is main-thread only
        if threading.current_thread() is threading.main_thread():
            self.original_handler = signal.signal(signal.SIGINT, self.signal_handler)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if hasattr(self, "original_handler"):
            signal.signal(signal.SIGINT, self.original_handler)
            del self.original_handler
        if self.signaled and exc_type is None:
            logger.warning(f"{self.target} written; stopping on the deferred Ctrl+C")
            raise KeyboardInterrupt
        return False

    def signal_handler(self, signum, frame):
        self.signaled += 1
        logger.warning(f"Ctrl+C detected while writing {self.target}; finishing the write first")


def append_rows(path, frame: pd.DataFrame, columns=None) -> int:
    """Append ``frame`` to the CSV at ``path`` without its header.

    The file is created with a header row when missing. Rows are flushed and
    synced before SIGINT is let through.

    Returns:
        int: The number of rows written.
    """
    path = Path(path)
    if columns is not None:
        frame = frame.reindex(columns=columns)
    with DeferredInterrupt(target=f"{len(frame)} row(s) of {path.name}"):
        write_header = not path.exists()
        with open(path, "a", encoding="utf-8", newline="") as f:
            frame.to_csv(f, header=write_header, index=False, lineterminator="\n")
            f.flush()
            os.fsync(f.fileno())
    return len(frame)


def write_header(path, columns) -> None:
    """Start (or truncate) a CSV file holding only the header row."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with DeferredInterrupt(target=f"header of {path.name}"):
        pd.DataFrame(columns=list(columns)).to_csv(path, index=False, lineterminator="\n")
