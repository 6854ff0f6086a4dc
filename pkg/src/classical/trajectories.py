"""
trajectories.py

Free motion in random microscopic time: the trajectory line is deterministic,
only the position along it is random, x_j = x0 + v theta_j.
"""

import numpy as np

from src.classical.diffusion_pde import FreeParticle
from src.timing.sampling import sample_theta
from src.timing.time_models import SamplerConfig, TimeModel


def evolve_trajectory_mc(particle: FreeParticle, model: TimeModel, t: float, cfg: SamplerConfig) -> np.ndarray:
    theta = sample_theta(model, t, cfg)
    return particle.x0 + particle.v * theta


def expected_position_moments(particle: FreeParticle, model: TimeModel, t: float) -> tuple[float, float]:
    """Exact mean and variance of x0 + v theta."""
    return particle.x0 + particle.v * model.theta_mean(t), particle.v**2 * model.theta_variance(t)
