"""
spreading.py

Spreading of a free Gaussian wave packet when the evolution time is itself
Gaussian-distributed (mean t, variance kappa * t * tau).

The conventional position density at fixed time theta is a normal density of
variance delta_x^2 + (hbar theta / (2 m delta_x))^2. The averaged density is
its mixture over theta, computed by adaptive Gauss-Legendre panels on the
window [max(0, t - 8s), t + 8s] with s = sqrt(kappa t tau) and the time density
truncated to the window and renormalized.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from src.errors import DomainError
from src.units import NATURAL, UnitSystem

logger = logging.getLogger(__name__)

WINDOW_SIGMAS = 8.0
TRUNCATION_WARN = 1e-6
GL_NODES = 32
MAX_PANELS = 1 << 12


@dataclass(frozen=True)
class GaussianPacket:
    m: float
    delta_x: float
    x0: float = 0.0

    def __post_init__(self):
        if not (self.m > 0 and self.delta_x > 0):
            raise DomainError(f"packet needs m > 0 and delta_x > 0, got m={self.m}, delta_x={self.delta_x}")

    def width(self, theta, units: UnitSystem = NATURAL):
        """Standard deviation of the position density after time theta."""
        spread = units.hbar * np.asarray(theta, dtype=float) / (2.0 * self.m * self.delta_x)
        return np.sqrt(self.delta_x**2 + spread**2)


def density_conventional(packet: GaussianPacket, x, theta, units: UnitSystem = NATURAL):
    if np.any(np.asarray(theta) < 0):
        raise DomainError(f"theta must be non-negative, got {theta}")
    return norm.pdf(x, loc=packet.x0, scale=packet.width(theta, units))


def _panel_integral(f, lo: float, hi: float, n_panels: int, nodes: np.ndarray, weights: np.ndarray):
    edges = np.linspace(lo, hi, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    theta = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    return f(theta) @ w


def density_averaged(
    packet: GaussianPacket,
    tau: float,
    kappa: float,
    t: float,
    x,
    units: UnitSystem = NATURAL,
    rtol: float = 1e-8,
):
    """Position density averaged over Gaussian microscopic time, vectorized over x."""
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    if tau < 0 or not kappa > 0:
        raise DomainError(f"need tau >= 0 and kappa > 0, got tau={tau}, kappa={kappa}")
    if tau == 0:
        return density_conventional(packet, x, t, units)

    s = np.sqrt(kappa * t * tau)
    lo, hi = max(0.0, t - WINDOW_SIGMAS * s), t + WINDOW_SIGMAS * s
    window_mass = norm.cdf(hi, t, s) - norm.cdf(lo, t, s)
    if 1.0 - window_mass > TRUNCATION_WARN:
        logger.warning(
            "time window [%.4g, %.4g] drops %.3g of the Gaussian time density (t=%g, tau=%g)",
            lo, hi, 1.0 - window_mass, t, tau,
        )

    x = np.atleast_1d(np.asarray(x, dtype=float))
    nodes, weights = np.polynomial.legendre.leggauss(GL_NODES)

    def integrand(theta):
        return density_conventional(packet, x[:, None], theta[None, :], units) * (norm.pdf(theta, t, s) / window_mass)

    n_panels = 1
    value = _panel_integral(integrand, lo, hi, n_panels, nodes, weights)
    while n_panels < MAX_PANELS:
        n_panels *= 2
        refined = _panel_integral(integrand, lo, hi, n_panels, nodes, weights)
        done = np.all(np.abs(refined - value) <= rtol * np.maximum(np.abs(refined), 1e-300))
        value = refined
        if done:
            break
    else:
        logger.warning("quadrature did not reach rtol=%g with %d panels", rtol, n_panels)

    return value if value.size > 1 else float(value[0])


def peak_bound(packet: GaussianPacket, tau: float, t: float, units: UnitSystem = NATURAL) -> float:
    """8 m^2 delta_x^3 / (sqrt(pi) hbar^2 tau t), the peak-height bound with tau restored."""
    if not (t > 0 and tau > 0):
        raise DomainError(f"peak bound needs t > 0 and tau > 0, got t={t}, tau={tau}")
    return 8.0 * packet.m**2 * packet.delta_x**3 / (np.sqrt(np.pi) * units.hbar**2 * tau * t)


def matched_time(packet: GaussianPacket, tau: float, l: float, units: UnitSystem = NATURAL) -> float:
    """Time at which random-time smearing reaches an arbitrary length l: 4 m^2 l^4 / (tau hbar^2)."""
    return 4.0 * packet.m**2 * l**4 / (tau * units.hbar**2)


def large_time_parameter(packet: GaussianPacket, tau: float, t: float, units: UnitSystem = NATURAL) -> float:
    """m delta_x^2 / (hbar sqrt(t tau)); the large-time regime needs this << 1."""
    return packet.m * packet.delta_x**2 / (units.hbar * np.sqrt(t * tau))


def spreading_ratio(
    packet: GaussianPacket, tau: float, t: float, units: UnitSystem = NATURAL, kappa: float = 2.0
) -> float:
    """Averaged over conventional peak height at the packet center."""
    if tau > 0:
        param = large_time_parameter(packet, tau, t, units)
        logger.info("large-time parameter m dx^2 / (hbar sqrt(t tau)) = %.3g (%s)", param, "ok" if param < 0.1 else "not small")
    averaged = density_averaged(packet, tau, kappa, t, packet.x0, units)
    return float(averaged / density_conventional(packet, packet.x0, t, units))
