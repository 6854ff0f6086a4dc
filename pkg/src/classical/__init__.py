from src.classical.diffusion_pde import (
    DensityGrid1D,
    FreeParticle,
    compare_pde_to_samples,
    evolve_diffusion_pde,
    stable_dt,
)
from src.classical.relativity import RelativisticParams, proper_time_relations, relativistic_tau
from src.classical.trajectories import evolve_trajectory_mc, expected_position_moments

__all__ = [
    "DensityGrid1D",
    "FreeParticle",
    "evolve_diffusion_pde",
    "stable_dt",
    "compare_pde_to_samples",
    "evolve_trajectory_mc",
    "expected_position_moments",
    "RelativisticParams",
    "relativistic_tau",
    "proper_time_relations",
]
