# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

"""Abstracts the lab-wide settings file for lrsense."""

import os

import yaml


class Config:
    def __init__(self, config_path):
        self.config_path = config_path
        self.config = self._load_config()

    def _load_config(self):
        with open(self.config_path, "r") as file:
            return yaml.safe_load(file) or {}

    def get(self, key, default=None):
        return self.config.get(key, default)

    def section(self, key):
        """Return a nested mapping (e.g. ``admm``), empty when absent."""
        value = self.config.get(key)
        return dict(value) if isinstance(value, dict) else {}


def resolve_config_path(default_path):
    """Pick the settings file, honouring the ``LRSENSE_CONFIG`` override.

    Priority (highest to lowest):
    1. ``LRSENSE_CONFIG`` environment variable
    2. The ``config.yml`` shipped next to the package
    """
    override = os.getenv("LRSENSE_CONFIG")
    if override:
        return override
    return default_path


def get_admm_defaults():
    """ADMM defaults from config.yml, with the built-in values as fallback."""
    from lrsense.paths import config

    defaults = {"max_iterations": 500, "cg_tolerance": 1e-8, "cg_max_iterations": 400}
    defaults.update(config.section("admm"))
    return defaults


def get_theory_defaults():
    from lrsense.paths import config

    defaults = {"alpha": 2.0, "c0": 3.0}
    defaults.update(config.section("theory"))
    return defaults
