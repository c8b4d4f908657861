# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

from pathlib import Path

from lrsense.config import Config, resolve_config_path

BASE_DIR = Path(__file__).resolve().parent
BASE_PARENT_DIR = BASE_DIR.parent
config = Config(resolve_config_path(BASE_DIR / "config.yml"))

# Data directories
DATA_DIR = BASE_PARENT_DIR / config.get("data_dir", "data")
RESULTS_DIR = DATA_DIR / "results"

# Cache of sampled ensembles (binary containers)
CACHE_DIR = DATA_DIR / config.get("cache_dir", "cache")
