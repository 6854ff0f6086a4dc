from src.timing.increments import (
    IncrementDensity,
    ValidationReport,
    increment_char_fn,
    moment_a2,
    validate_density,
)
from src.timing.sampling import sample_theta
from src.timing.time_models import (
    SamplerConfig,
    TimeModel,
    gaussian_truncation_mass,
    laplace_transform,
    macro_char_fn,
    sampling_metadata,
)

__all__ = [
    "IncrementDensity",
    "ValidationReport",
    "SamplerConfig",
    "TimeModel",
    "increment_char_fn",
    "moment_a2",
    "validate_density",
    "macro_char_fn",
    "laplace_transform",
    "gaussian_truncation_mass",
    "sampling_metadata",
    "sample_theta",
]
