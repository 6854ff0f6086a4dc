from src.estimators.bounds import (
    PRESETS,
    EnergySplit,
    OscillationBounds,
    aharonov_bohm_time,
    beam_threshold,
    decoherence_time,
    flow_stddev,
    lifetime_tau_bound,
    oscillation_bounds,
    oscillation_energy_split,
    preset_bounds,
)

__all__ = [
    "PRESETS",
    "EnergySplit",
    "OscillationBounds",
    "decoherence_time",
    "flow_stddev",
    "beam_threshold",
    "oscillation_bounds",
    "oscillation_energy_split",
    "lifetime_tau_bound",
    "aharonov_bohm_time",
    "preset_bounds",
]
