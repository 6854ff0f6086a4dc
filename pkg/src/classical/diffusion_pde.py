"""
diffusion_pde.py

Averaged Liouville evolution of a free particle's position density:

    dW/dt = v dW/dx + v^2 tau d^2W/dx^2

Explicit conservative finite volumes on a uniform grid: upwind advection with
transport velocity -v, centered diffusion with D = v^2 tau, zero flux through
both edges. With the printed sign a density translates toward -x for v > 0.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from src import config
from src.errors import BoundaryMassError, DomainError, StabilityError

logger = logging.getLogger(__name__)

MIN_CELLS = 64


@dataclass(frozen=True, eq=False)
class DensityGrid1D:
    """Cell-averaged probability density on [x_min, x_max]."""

    x_min: float
    x_max: float
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size < MIN_CELLS:
            raise DomainError(f"grid needs at least {MIN_CELLS} cells, got {values.size}")
        if not self.x_max > self.x_min:
            raise DomainError(f"x_max must exceed x_min, got [{self.x_min}, {self.x_max}]")
        if np.any(values < 0):
            raise DomainError("density has negative values")
        mass = values.sum() * (self.x_max - self.x_min) / values.size
        if abs(mass - 1.0) > config.PDE_MASS_TOL:
            raise DomainError(f"density mass {mass:.9g} differs from 1 by more than {config.PDE_MASS_TOL}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def gaussian(cls, x_min: float, x_max: float, n_cells: int, center: float, sigma: float) -> "DensityGrid1D":
        edges = np.linspace(x_min, x_max, n_cells + 1)
        mass = np.diff(norm.cdf(edges, loc=center, scale=sigma))
        dx = (x_max - x_min) / n_cells
        return cls(x_min, x_max, mass / mass.sum() / dx)

    @property
    def n_cells(self) -> int:
        return self.values.size

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_cells

    @property
    def edges(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_cells + 1)

    @property
    def centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.dx

    @property
    def mass(self) -> float:
        return float(self.values.sum() * self.dx)

    @property
    def mean(self) -> float:
        return float(np.sum(self.centers * self.values) * self.dx)

    @property
    def variance(self) -> float:
        x = self.centers
        return float(np.sum((x - self.mean) ** 2 * self.values) * self.dx)


@dataclass(frozen=True)
class FreeParticle:
    x0: float
    v: float

    def __post_init__(self):
        if not (math.isfinite(self.x0) and math.isfinite(self.v)):
            raise DomainError(f"particle needs finite x0 and v, got {self.x0}, {self.v}")


def stable_dt(dx: float, v: float, tau: float) -> float:
    """Largest step the explicit scheme accepts: 0.4 * min(dx/|v|, dx^2/(2 v^2 tau))."""
    advective = dx / abs(v) if v else math.inf
    diffusive = dx**2 / (2.0 * v**2 * tau) if v and tau else math.inf
    return config.PDE_CFL * min(advective, diffusive)


def evolve_diffusion_pde(W0: DensityGrid1D, particle: FreeParticle, tau: float, t: float, dt: float) -> DensityGrid1D:
    if tau < 0 or t < 0:
        raise DomainError(f"tau and t must be non-negative, got tau={tau}, t={t}")
    dx = W0.dx
    limit = stable_dt(dx, particle.v, tau)
    if not 0 < dt <= limit:
        raise StabilityError(f"dt = {dt:.6g} exceeds the stability limit {limit:.6g} (dx={dx:.3g}, v={particle.v})")

    n_steps = math.ceil(t / dt - 1e-9) if t > 0 else 0
    if n_steps == 0 or particle.v == 0:
        return W0
    h = t / n_steps

    a = -particle.v
    D = particle.v**2 * tau
    W = np.array(W0.values)
    flux = np.zeros(W.size + 1)

    for step in range(n_steps):
        upwind = W[:-1] if a > 0 else W[1:]
        flux[1:-1] = a * upwind - D * (W[1:] - W[:-1]) / dx
        W -= (h / dx) * (flux[1:] - flux[:-1])

        edge = max(W[0], W[-1]) * dx
        if edge > config.PDE_BOUNDARY_MASS:
            raise BoundaryMassError(
                f"mass {edge:.3g} reached the grid edge at t = {(step + 1) * h:.6g}; widen the domain"
            )

    mass = W.sum() * dx
    logger.debug("pde: %d steps of %.3g, final mass %.12g", n_steps, h, mass)
    return DensityGrid1D(W0.x_min, W0.x_max, np.clip(W, 0.0, None))


def compare_pde_to_samples(grid: DensityGrid1D, positions: np.ndarray, coarsen: int = 1) -> float:
    """L1 distance between the grid density and the sample histogram on coarsened grid bins."""
    if coarsen < 1 or grid.n_cells % coarsen:
        raise DomainError(f"coarsen must divide the cell count {grid.n_cells}, got {coarsen}")
    edges = grid.edges[::coarsen]
    width = grid.dx * coarsen
    pde_mass = grid.values.reshape(-1, coarsen).sum(axis=1) * grid.dx
    counts, _ = np.histogram(positions, bins=edges)
    mc_mass = counts / positions.size
    outside = 1.0 - mc_mass.sum()
    logger.debug("compare: %d bins of width %.3g, %.3g of samples outside the grid", pde_mass.size, width, outside)
    return float(np.abs(pde_mass - mc_mass).sum() + outside)
