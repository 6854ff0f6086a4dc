"""
time_models.py

Stochastic models of the microscopic time theta given the macroscopic time t.

- poisson: theta is a Poisson-counted sum of increments tau*xi (mean count t/tau)
- gaussian: theta ~ Normal(t, kappa*t*tau); kappa = 2 matches the exact
  compound-Poisson variance of exponential increments and the second-order
  master equation, kappa = 1 gives the narrower
  variance t*tau
- modified_poisson: as poisson, but the atom at theta = 0 (no tick yet) is
  replaced by one initial increment tau*xi0 drawn from a second density

Sign convention: quantum phases use E[exp(-i omega theta)], i.e. macro_char_fn
evaluated at lambda = -omega.
"""

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.stats import norm

from src import config
from src.errors import DomainError, InvalidDensityError, SamplerRangeError
from src.timing.increments import IncrementDensity

Family = Literal["poisson", "gaussian", "modified_poisson"]


@dataclass(frozen=True)
class TimeModel:
    tau: float
    family: Family = "poisson"
    increments: IncrementDensity | None = None
    initial: IncrementDensity | None = None
    kappa: float = 2.0

    def __post_init__(self):
        if not self.tau > 0:
            raise DomainError(f"tau must be positive, got {self.tau}")
        if self.family == "gaussian":
            if not self.kappa > 0:
                raise DomainError(f"kappa must be positive, got {self.kappa}")
        elif self.family in ("poisson", "modified_poisson"):
            if self.increments is None:
                object.__setattr__(self, "increments", IncrementDensity.exponential())
            if self.family == "modified_poisson" and self.initial is None:
                raise InvalidDensityError("modified_poisson needs an initial increment density")
        else:
            raise DomainError(f"Unknown time model family: {self.family!r}")

    @classmethod
    def poisson(cls, tau: float, increments: IncrementDensity | None = None) -> "TimeModel":
        return cls(tau=tau, family="poisson", increments=increments or IncrementDensity.exponential())

    @classmethod
    def modular(cls, tau: float) -> "TimeModel":
        return cls(tau=tau, family="poisson", increments=IncrementDensity.deterministic())

    @classmethod
    def gaussian(cls, tau: float, kappa: float = 2.0) -> "TimeModel":
        return cls(tau=tau, family="gaussian", kappa=kappa)

    @classmethod
    def modified_poisson(cls, tau: float, increments: IncrementDensity, initial: IncrementDensity) -> "TimeModel":
        return cls(tau=tau, family="modified_poisson", increments=increments, initial=initial)

    @property
    def is_semigroup(self) -> bool:
        """True when the averaged evolution obeys a time-homogeneous master equation."""
        return self.family in ("poisson", "gaussian")

    @property
    def effective_a2(self) -> float:
        """Coefficient of the double-commutator term of the second-order master equation."""
        if self.family == "gaussian":
            return self.kappa
        return self.increments.second_moment

    def theta_mean(self, t: float) -> float:
        if self.family == "gaussian":
            return t
        mu = self.increments.mean * t
        if self.family == "modified_poisson":
            mu += self.tau * self.initial.mean * np.exp(-t / self.tau)
        return float(mu)

    def theta_variance(self, t: float) -> float:
        if self.family == "gaussian":
            return self.kappa * t * self.tau
        compound = self.increments.second_moment * t * self.tau
        if self.family == "poisson":
            return float(compound)
        # theta = sum of increments if a tick occurred, else the initial increment
        q = np.exp(-t / self.tau)
        mu = self.increments.mean * t
        mean = mu + self.tau * self.initial.mean * q
        second = compound + mu**2 + self.tau**2 * self.initial.second_moment * q
        return float(second - mean**2)


@dataclass(frozen=True)
class SamplerConfig:
    seed: int
    n_samples: int
    n_jobs: int = config.N_JOBS

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.n_samples < 1:
            raise DomainError(f"n_samples must be positive, got {self.n_samples}")


def macro_char_fn(model: TimeModel, lam, t: float):
    """E[exp(i lam theta)] at macroscopic time t, vectorized over lam."""
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    lam = np.asarray(lam, dtype=float)
    tau = model.tau

    if model.family == "gaussian":
        out = np.exp(1j * lam * t - 0.5 * model.kappa * lam**2 * t * tau)
    else:
        phi = model.increments.char_fn(lam * tau)
        out = np.exp((phi - 1.0) * (t / tau))
        if model.family == "modified_poisson":
            phi0 = model.initial.char_fn(lam * tau)
            out = out + np.exp(-t / tau) * (phi0 - 1.0)

    out = np.asarray(out, dtype=complex)
    return out[()] if out.ndim == 0 else out


def laplace_transform(model: TimeModel, s: float, t: float) -> float:
    """E[exp(-s theta)] for s >= 0: the characteristic function continued to lam = i s."""
    if s < 0:
        raise DomainError(f"Laplace argument must be non-negative, got {s}")
    tau = model.tau
    if model.family == "gaussian":
        return float(np.exp(-s * t + 0.5 * model.kappa * s**2 * t * tau))
    out = np.exp((model.increments.laplace(s * tau) - 1.0) * (t / tau))
    if model.family == "modified_poisson":
        out += np.exp(-t / tau) * (model.initial.laplace(s * tau) - 1.0)
    return float(out)


def gaussian_truncation_mass(model: TimeModel, t: float) -> float:
    """Probability mass below theta = 0 removed by the rejection step of Gaussian time."""
    if model.family != "gaussian" or t <= 0:
        return 0.0
    return float(norm.cdf(-t / np.sqrt(model.kappa * t * model.tau)))


def sampling_metadata(model: TimeModel, t: float) -> dict:
    return {
        "family": model.family,
        "tau": model.tau,
        "t": t,
        "expected_ticks": None if model.family == "gaussian" else t / model.tau,
        "truncation_mass": gaussian_truncation_mass(model, t),
    }


def draw_theta_block(model: TimeModel, t: float, rng: np.random.Generator, size: int) -> np.ndarray:
    """Draw `size` microscopic times from one block stream."""
    tau = model.tau
    if model.family == "gaussian":
        if t == 0:
            return np.zeros(size)
        sd = np.sqrt(model.kappa * t * tau)
        theta = rng.normal(t, sd, size)
        bad = theta < 0
        while bad.any():
            theta[bad] = rng.normal(t, sd, int(bad.sum()))
            bad = theta < 0
        return theta

    ticks = rng.poisson(t / tau, size)
    theta = tau * model.increments.sample_sums(rng, ticks)
    if model.family == "modified_poisson":
        idle = ticks == 0
        theta[idle] = tau * model.initial.sample(rng, int(idle.sum()))
    return theta


def check_tick_range(model: TimeModel, t: float):
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    if model.family != "gaussian" and t / model.tau > config.MAX_TICKS:
        raise SamplerRangeError(f"t/tau = {t / model.tau:.3g} exceeds the Poisson sampler limit {config.MAX_TICKS:.0e}")
