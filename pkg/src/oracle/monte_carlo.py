"""
monte_carlo.py

Monte Carlo oracle: average exact unitary evolutions over sampled microscopic
times and compare the result against analytic or ODE states.

Every block of SAMPLE_BLOCK_SIZE samples is reduced to (count, mean, M2) per
element and the blocks are merged in block order with the pairwise update of
Chan et al., so results are bit-identical for any worker count.
"""

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from src import config
from src.errors import DimensionMismatchError, DomainError
from src.quantum.states import DensityMatrix, Hamiltonian, check_dims
from src.timing.sampling import map_blocks
from src.timing.time_models import SamplerConfig, TimeModel, check_tick_range, draw_theta_block
from src.units import NATURAL, UnitSystem

logger = logging.getLogger(__name__)

# elements per vectorized chunk inside a block
_CHUNK_ELEMENTS = 1 << 22


@dataclass(frozen=True)
class Moments:
    """Count, mean and centered sums of squares of a complex sample, per element."""

    n: int
    mean: np.ndarray
    m2_re: np.ndarray
    m2_im: np.ndarray

    @classmethod
    def of(cls, values: np.ndarray) -> "Moments":
        mean = values.mean(axis=0)
        dev = values - mean
        return cls(values.shape[0], mean, np.sum(dev.real**2, axis=0), np.sum(dev.imag**2, axis=0))

    def merge(self, other: "Moments") -> "Moments":
        n = self.n + other.n
        delta = other.mean - self.mean
        w = self.n * other.n / n
        return Moments(
            n=n,
            mean=self.mean + delta * (other.n / n),
            m2_re=self.m2_re + other.m2_re + delta.real**2 * w,
            m2_im=self.m2_im + other.m2_im + delta.imag**2 * w,
        )

    @property
    def stderr_real(self) -> np.ndarray:
        return np.sqrt(self.m2_re / (self.n - 1) / self.n) if self.n > 1 else np.zeros_like(self.m2_re)

    @property
    def stderr_imag(self) -> np.ndarray:
        return np.sqrt(self.m2_im / (self.n - 1) / self.n) if self.n > 1 else np.zeros_like(self.m2_im)


def reduce_in_order(parts: list[Moments]) -> Moments:
    total = parts[0]
    for part in parts[1:]:
        total = total.merge(part)
    return total


@dataclass(frozen=True, eq=False)
class OracleResult:
    mean_state: np.ndarray
    stderr_real: np.ndarray
    stderr_imag: np.ndarray
    n_samples: int
    seed: int

    @property
    def stderr(self) -> np.ndarray:
        return np.hypot(self.stderr_real, self.stderr_imag)


@dataclass(frozen=True)
class PhaseKernel:
    """exp(-i omega theta)"""

    omega: float

    def __call__(self, theta: np.ndarray) -> np.ndarray:
        return np.exp(-1j * self.omega * theta)


@dataclass(frozen=True)
class DecayKernel:
    """exp(-theta / T)"""

    lifetime: float

    def __post_init__(self):
        if not self.lifetime > 0:
            raise DomainError(f"lifetime must be positive, got {self.lifetime}")

    def __call__(self, theta: np.ndarray) -> np.ndarray:
        return np.exp(-theta / self.lifetime).astype(complex)


def _check_samples(cfg: SamplerConfig):
    if cfg.n_samples < config.MIN_ORACLE_SAMPLES:
        raise DomainError(f"oracle needs n_samples >= {config.MIN_ORACLE_SAMPLES}, got {cfg.n_samples}")


def average_density_matrix(
    rho0: DensityMatrix,
    H: Hamiltonian,
    model: TimeModel,
    t: float,
    cfg: SamplerConfig,
    units: UnitSystem = NATURAL,
) -> OracleResult:
    """Sample mean of evolve_unitary(rho0, H, theta_j) with per-element standard errors."""
    check_dims(rho0, H)
    _check_samples(cfg)
    check_tick_range(model, t)

    Re = H.to_energy_basis(rho0.data)
    omega = H.gaps() / units.hbar
    V, Vh = H.eigvecs, H.eigvecs.conj().T
    chunk = max(1, _CHUNK_ELEMENTS // Re.size)

    def work(rng, size):
        theta = draw_theta_block(model, t, rng, size)
        parts = []
        for start in range(0, size, chunk):
            th = theta[start : start + chunk]
            states = V @ (Re * np.exp(-1j * omega * th[:, None, None])) @ Vh
            parts.append(Moments.of(states))
        return reduce_in_order(parts)

    total = reduce_in_order(map_blocks(work, cfg))
    logger.info("oracle averaged %d samples (family=%s, t=%g, seed=%d)", total.n, model.family, t, cfg.seed)
    return OracleResult(
        mean_state=total.mean,
        stderr_real=total.stderr_real,
        stderr_imag=total.stderr_imag,
        n_samples=total.n,
        seed=cfg.seed,
    )


def average_scalar(kernel, model: TimeModel, t: float, cfg: SamplerConfig) -> tuple[complex, float]:
    """Sample mean of kernel(theta) and its standard error sqrt(var_re + var_im) / sqrt(n)."""
    _check_samples(cfg)
    check_tick_range(model, t)

    def work(rng, size):
        return Moments.of(kernel(draw_theta_block(model, t, rng, size))[:, None])

    total = reduce_in_order(map_blocks(work, cfg))
    stderr = float(np.hypot(total.stderr_real[0], total.stderr_imag[0]))
    return complex(total.mean[0]), stderr


@dataclass(frozen=True, eq=False)
class ComparisonReport:
    max_abs_deviation: float
    max_z_score: float
    table: pd.DataFrame
    z_limit: float = config.Z_SCORE_LIMIT

    @property
    def passed(self) -> bool:
        return self.max_z_score <= self.z_limit

    @property
    def flagged(self) -> pd.DataFrame:
        return self.table[self.table["z"] > self.z_limit]


def compare(result: OracleResult, reference) -> ComparisonReport:
    ref = reference.data if isinstance(reference, DensityMatrix) else np.asarray(reference, dtype=complex)
    if ref.shape != result.mean_state.shape:
        raise DimensionMismatchError(f"reference shape {ref.shape} != oracle shape {result.mean_state.shape}")

    dev = result.mean_state - ref
    se_re = np.maximum(result.stderr_real, config.STDERR_FLOOR)
    se_im = np.maximum(result.stderr_imag, config.STDERR_FLOOR)
    z = np.maximum(np.abs(dev.real) / se_re, np.abs(dev.imag) / se_im)

    k, l = np.indices(dev.shape)
    table = pd.DataFrame(
        {
            "k": k.ravel(),
            "l": l.ravel(),
            "dev_re": dev.real.ravel(),
            "dev_im": dev.imag.ravel(),
            "stderr_re": result.stderr_real.ravel(),
            "stderr_im": result.stderr_imag.ravel(),
            "z": z.ravel(),
        }
    )
    return ComparisonReport(
        max_abs_deviation=float(np.max(np.abs(dev))),
        max_z_score=float(np.max(z)),
        table=table,
    )


def deviation_slope(n_samples, deviations) -> float:
    """Log-log regression slope of deviation against sample count (about -0.5 for a sound oracle)."""
    slope, _ = np.polyfit(np.log(np.asarray(n_samples, dtype=float)), np.log(np.asarray(deviations)), 1)
    return float(slope)
