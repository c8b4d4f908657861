# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

"""Utility classes for handling solver status and errors."""

from enum import Enum

from colorama import Fore, Style

from lrsense.paths import config


class SolveStatus(Enum):
    CONVERGED = 1
    MAX_ITERATIONS = 2


class LabError(Exception):
    """Base class for every error raised on purpose by lrsense."""


class DimensionError(LabError, ValueError):
    def __init__(self, what, expected, actual):
        super().__init__(f"Dimension mismatch for {what}: expected {expected}, got {actual}")
        self.what = what
        self.expected = expected
        self.actual = actual


class DomainError(LabError, ValueError):
    def __init__(self, parameter, value, requirement):
        super().__init__(f"Invalid {parameter}={value!r}: {requirement}")
        self.parameter = parameter
        self.value = value
        self.requirement = requirement


class PackingError(LabError):
    def __init__(self, epsilon, attempts, cardinality, required):
        super().__init__(
            f"Packing holds {cardinality} < {required} projections after {attempts} attempts; "
            f"epsilon={epsilon} is too large"
        )
        self.epsilon = epsilon
        self.attempts = attempts
        self.cardinality = cardinality
        self.required = required


class ConfigError(LabError):
    def __init__(self, message):
        super().__init__(f"Error loading configuration: {message}")
        self.message = message


class ContainerError(LabError):
    def __init__(self, path, message):
        super().__init__(f"Malformed container {path}: {message}")
        self.path = path
        self.message = message


class UsageError(LabError):
    def __init__(self, message):
        super().__init__(message)
        self.message = message


class TrialPrint:
    def __init__(self):
        self.enable_printing = config.get("print_trials", True)

    def trial(self, record):
        if not self.enable_printing:
            return
        color = Fore.GREEN if record.converged else Fore.RED
        print(
            f"{color}m={record.m} r={record.r} trial={record.trial}{Style.RESET_ALL} "
            f"iters={record.iterations} spectral={record.spectral_error:.3e} "
            f"ratio={record.ratio_spectral:.2f} cone_ok={record.cone_ok}"
        )

