# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

from lrsense.orchestrator.experiment import ExperimentConfig
from lrsense.utils.status import ConfigError

DESK_GRID = {"m_values": [40], "r_values": [3, 5, 7], "trials": 3, "sigma_xi": 0.01}
# Ranks 3..21 as plotted (the text also mentions 25)
FULL_GRID = {"m_values": [40, 50, 60], "r_values": list(range(3, 22)), "trials": 5, "sigma_xi": 0.01}


class PresetRegistry:
    def __init__(self):
        self.PRESET_REGISTRY = {
            # Spectral accuracy vs rank, Gaussian design
            "fig1-desk": lambda: ExperimentConfig(name="fig1-desk", ensemble_kind="gaussian", **DESK_GRID),
            "fig1-full": lambda: ExperimentConfig(name="fig1-full", ensemble_kind="gaussian", **FULL_GRID),
            # Same grid, Rademacher design
            "fig2-desk": lambda: ExperimentConfig(name="fig2-desk", ensemble_kind="rademacher", **DESK_GRID),
            "fig2-full": lambda: ExperimentConfig(name="fig2-full", ensemble_kind="rademacher", **FULL_GRID),
            # Noiseless recovery check
            "noiseless-smoke": lambda: ExperimentConfig(
                name="noiseless-smoke",
                m_values=[8],
                r_values=[2],
                n_rule="explicit",
                n_values=[200],
                trials=1,
                sigma_xi=0.0,
            ),
        }

    def get_preset(self, preset_id: str) -> ExperimentConfig:
        if preset_id not in self.PRESET_REGISTRY:
            raise ConfigError(f"preset {preset_id!r} not found; available: {', '.join(self.get_preset_ids())}")
        return self.PRESET_REGISTRY[preset_id]()

    def get_preset_ids(self, kind: str = None):
        if kind:
            return [k for k in self.PRESET_REGISTRY if kind in k]
        return list(self.PRESET_REGISTRY)
