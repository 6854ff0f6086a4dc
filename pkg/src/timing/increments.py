"""
increments.py

Dimensionless increment densities p(xi) on xi >= 0. A clock tick advances the
microscopic time by tau * xi with xi drawn from one of these densities.

Kinds:
- exponential: p = exp(-xi), the conventional Poisson clock
- gamma: p = xi^(s-1) exp(-xi / scale) / (Gamma(s) scale^s); the plain
  gamma clock has scale 1 (mean s), the mean-normalized variant scale 1/s
- deterministic: p = delta(xi - 1), the modular clock
- tabulated: user grid of (xi, p) pairs, trapezoid rule throughout

Every instance is validated on construction, so any IncrementDensity that
exists is normalized.
"""

import logging
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.integrate import trapezoid

from src import config
from src.errors import InvalidDensityError

logger = logging.getLogger(__name__)

DensityKind = Literal["exponential", "gamma", "deterministic", "tabulated"]


@dataclass(frozen=True)
class ValidationReport:
    kind: str
    normalization: float
    mean: float
    warnings: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.warnings


@dataclass(frozen=True, eq=False)
class IncrementDensity:
    kind: DensityKind
    order: float = 1.0
    scale: float = 1.0
    xi: np.ndarray | None = field(default=None, repr=False)
    p: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind == "gamma":
            if not (self.order > 0 and self.scale > 0):
                raise InvalidDensityError(f"gamma needs order > 0 and scale > 0, got s={self.order}, scale={self.scale}")
        elif self.kind == "tabulated":
            xi, p = _check_grid(self.xi, self.p)
            object.__setattr__(self, "xi", xi)
            object.__setattr__(self, "p", p)
        elif self.kind not in ("exponential", "deterministic"):
            raise InvalidDensityError(f"Unknown increment density kind: {self.kind!r}")

    # Constructors

    @classmethod
    def exponential(cls) -> "IncrementDensity":
        return cls("exponential")

    @classmethod
    def gamma(cls, s: float = 2.0, mean_normalized: bool = False) -> "IncrementDensity":
        return cls("gamma", order=float(s), scale=1.0 / s if mean_normalized else 1.0)

    @classmethod
    def deterministic(cls) -> "IncrementDensity":
        return cls("deterministic")

    @classmethod
    def tabulated(cls, xi, p) -> "IncrementDensity":
        return cls("tabulated", xi=np.asarray(xi, dtype=float), p=np.asarray(p, dtype=float))

    # Moments and transforms

    @property
    def normalization(self) -> float:
        if self.kind == "tabulated":
            return float(trapezoid(self.p, self.xi))
        return 1.0

    @property
    def mean(self) -> float:
        if self.kind == "gamma":
            return self.order * self.scale
        if self.kind == "tabulated":
            return float(trapezoid(self.xi * self.p, self.xi))
        return 1.0

    @property
    def second_moment(self) -> float:
        """a^2 = integral of xi^2 p(xi)."""
        if self.kind == "exponential":
            return 2.0
        if self.kind == "gamma":
            return self.order * (self.order + 1.0) * self.scale**2
        if self.kind == "deterministic":
            return 1.0
        return float(trapezoid(self.xi**2 * self.p, self.xi))

    @property
    def variance(self) -> float:
        return self.second_moment - self.mean**2

    def char_fn(self, zeta):
        """phi(zeta) = E[exp(i zeta xi)], vectorized over zeta."""
        zeta = np.asarray(zeta, dtype=float)
        if self.kind == "exponential":
            out = 1.0 / (1.0 - 1j * zeta)
        elif self.kind == "gamma":
            out = (1.0 - 1j * zeta * self.scale) ** (-self.order)
        elif self.kind == "deterministic":
            out = np.exp(1j * zeta)
        else:
            phase = np.exp(1j * np.multiply.outer(zeta, self.xi))
            out = trapezoid(phase * self.p, self.xi, axis=-1)
        return out[()] if np.ndim(out) == 0 else out

    def laplace(self, s):
        """E[exp(-s xi)] for s >= 0, vectorized over s."""
        s = np.asarray(s, dtype=float)
        if self.kind == "exponential":
            out = 1.0 / (1.0 + s)
        elif self.kind == "gamma":
            out = (1.0 + s * self.scale) ** (-self.order)
        elif self.kind == "deterministic":
            out = np.exp(-s)
        else:
            out = trapezoid(np.exp(-np.multiply.outer(s, self.xi)) * self.p, self.xi, axis=-1)
        return out[()] if np.ndim(out) == 0 else out

    # Sampling

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "exponential":
            return rng.exponential(1.0, size)
        if self.kind == "gamma":
            return rng.gamma(self.order, self.scale, size)
        if self.kind == "deterministic":
            return np.ones(size)
        return self._sample_tabulated(rng, size)

    def sample_sums(self, rng: np.random.Generator, counts: np.ndarray) -> np.ndarray:
        """Sum of counts[j] independent increments for every j."""
        counts = np.asarray(counts, dtype=np.int64)
        if self.kind == "exponential":
            # shape 0 gives exactly 0
            return rng.gamma(counts.astype(float), 1.0)
        if self.kind == "gamma":
            return rng.gamma(counts * self.order, self.scale)
        if self.kind == "deterministic":
            return counts.astype(float)
        return self._sum_tabulated(rng, counts)

    def _sum_tabulated(self, rng: np.random.Generator, counts: np.ndarray) -> np.ndarray:
        # draw index i belongs to the first sample whose running count exceeds i
        ends = np.cumsum(counts)
        total = int(ends[-1]) if ends.size else 0
        budget = config.TABULATED_DRAW_BUDGET
        sums = np.zeros(counts.size)
        for lo in range(0, total, budget):
            hi = min(lo + budget, total)
            owner = np.searchsorted(ends, np.arange(lo, hi), side="right")
            sums += np.bincount(owner, weights=self._sample_tabulated(rng, hi - lo), minlength=counts.size)
        return sums

    def _sample_tabulated(self, rng: np.random.Generator, size: int) -> np.ndarray:
        # Exact draw from the piecewise-linear density on the grid
        h = np.diff(self.xi)
        cell_mass = 0.5 * h * (self.p[:-1] + self.p[1:])
        cdf = np.cumsum(cell_mass)
        u = rng.random(size) * cdf[-1]
        cell = np.minimum(np.searchsorted(cdf, u, side="right"), cell_mass.size - 1)
        u_in = u - (cdf[cell] - cell_mass[cell])
        p0 = self.p[cell]
        slope = (self.p[cell + 1] - p0) / h[cell]
        root = np.sqrt(np.maximum(p0**2 + 2.0 * slope * u_in, 0.0))
        denom = p0 + root
        with np.errstate(divide="ignore", invalid="ignore"):
            d = np.where(denom > 0, 2.0 * u_in / denom, 0.0)
        return self.xi[cell] + np.clip(d, 0.0, h[cell])


def _check_grid(xi, p) -> tuple[np.ndarray, np.ndarray]:
    if xi is None or p is None:
        raise InvalidDensityError("tabulated density needs both xi and p")
    xi = np.array(xi, dtype=float)
    p = np.array(p, dtype=float)
    if xi.ndim != 1 or xi.shape != p.shape:
        raise InvalidDensityError(f"xi and p must be 1-D arrays of equal length, got {xi.shape} and {p.shape}")
    if xi.size < config.TABULATED_MIN_POINTS:
        raise InvalidDensityError(f"tabulated grid needs >= {config.TABULATED_MIN_POINTS} points, got {xi.size}")
    if not np.all(np.isfinite(xi)) or not np.all(np.isfinite(p)):
        raise InvalidDensityError("tabulated grid contains non-finite values")
    if xi[0] < 0 or np.any(np.diff(xi) <= 0):
        raise InvalidDensityError("tabulated xi must be non-negative and strictly increasing")
    if np.any(p < 0):
        raise InvalidDensityError("tabulated p has negative values")
    total = trapezoid(p, xi)
    if not total > 0:
        raise InvalidDensityError(f"tabulated density is not normalizable (integral = {total})")
    p = p / total
    if not np.isfinite(trapezoid(xi**2 * p, xi)):
        raise InvalidDensityError("tabulated density has a divergent second moment")
    xi.setflags(write=False)
    p.setflags(write=False)
    return xi, p


def increment_char_fn(density: IncrementDensity, zeta):
    return density.char_fn(zeta)


def moment_a2(density: IncrementDensity) -> float:
    return density.second_moment


def validate_density(density: IncrementDensity, strict_mean: bool = False) -> ValidationReport:
    """
    Check normalization and the unit-mean condition.

    A mean away from 1 is an error in strict mode and a warning otherwise;
    the plain gamma clock (s=2, scale 1) has mean 2 and only passes leniently.
    """
    norm = density.normalization
    if abs(norm - 1.0) > config.NORMALIZATION_TOL:
        raise InvalidDensityError(f"{density.kind}: integral of p = {norm:.12g}, expected 1")

    mean = density.mean
    warnings = []
    if abs(mean - 1.0) > config.NORMALIZATION_TOL:
        msg = f"{density.kind}: mean = {mean:.12g}, expected 1"
        if strict_mean:
            raise InvalidDensityError(msg)
        logger.warning(msg)
        warnings.append(msg)

    return ValidationReport(kind=density.kind, normalization=norm, mean=mean, warnings=tuple(warnings))
