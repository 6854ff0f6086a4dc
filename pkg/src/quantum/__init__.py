from src.quantum.decay_law import effective_lifetime, survival_probability
from src.quantum.entropy import (
    brute_force_lemma_minimum,
    entropy,
    entropy_rate,
    lemma_check,
    purity,
    random_doubly_stochastic,
)
from src.quantum.evolve import (
    decay_rate,
    decoherence_factor,
    evolve_analytic,
    evolve_analytic_trajectory,
    evolve_ode,
    evolve_unitary,
)
from src.quantum.states import DensityMatrix, EvolutionTrajectory, Hamiltonian

__all__ = [
    "DensityMatrix",
    "Hamiltonian",
    "EvolutionTrajectory",
    "evolve_unitary",
    "evolve_analytic",
    "evolve_analytic_trajectory",
    "evolve_ode",
    "decay_rate",
    "decoherence_factor",
    "entropy",
    "purity",
    "entropy_rate",
    "lemma_check",
    "brute_force_lemma_minimum",
    "random_doubly_stochastic",
    "survival_probability",
    "effective_lifetime",
]
