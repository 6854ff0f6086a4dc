"""
bounds.py

Order-of-magnitude calculators relating the time scale tau to observable
quantities: decoherence times, beam interference thresholds, oscillation and
lifetime bounds. CGS (erg, s, cm) is the default unit system here.
"""

import logging
import math
from dataclasses import dataclass
from typing import Literal, NamedTuple

from src.errors import DomainError
from src.units import CGS, UnitSystem

logger = logging.getLogger(__name__)

Regime = Literal["non_relativistic", "ultra_relativistic"]

# E must exceed this multiple of delta_m c^2 for the ultra-relativistic form
ULTRA_RELATIVISTIC_MARGIN = 10.0


def _positive(**values):
    for name, value in values.items():
        if not value > 0:
            raise DomainError(f"{name} must be positive, got {value}")


def decoherence_time(tau: float, delta_E: float, units: UnitSystem = CGS) -> float:
    """pi^2 hbar^2 / (tau delta_E^2): time for a superposition with gap delta_E to become a mixture."""
    _positive(tau=tau, delta_E=delta_E)
    return math.pi**2 * units.hbar**2 / (tau * delta_E**2)


def flow_stddev(t: float, tau: float) -> float:
    """sqrt(t tau), the spread of microscopic time accumulated over t."""
    if t < 0 or tau < 0:
        raise DomainError(f"t and tau must be non-negative, got t={t}, tau={tau}")
    return math.sqrt(t * tau)


def beam_threshold(l: float, tau0: float, gamma: float, units: UnitSystem = CGS) -> float:
    """
    Energy split above which two beams of a relativistic particle decohere
    over flight length l. gamma = mc^2 / E; the threshold peaks at gamma = 1/sqrt(2).
    """
    _positive(l=l, tau0=tau0)
    if not 0 < gamma <= 1:
        raise DomainError(f"gamma must be in (0, 1], got {gamma}")
    return 0.5 * math.pi * units.hbar * math.sqrt(units.c / (l * tau0)) * math.sqrt(1.0 - gamma**2) * gamma


class OscillationBounds(NamedTuple):
    tau_weak: float
    tau_strong: float


def oscillation_bounds(t_os: float, t_f: float) -> OscillationBounds:
    """Oscillations seen for t_f with half-period t_os imply tau < t_os, and tau < t_os^2 / t_f."""
    _positive(t_os=t_os, t_f=t_f)
    if t_os > t_f:
        raise DomainError(f"t_os = {t_os} exceeds the observed flight time t_f = {t_f}")
    return OscillationBounds(tau_weak=t_os, tau_strong=t_os**2 / t_f)


class EnergySplit(NamedTuple):
    delta_E: float
    t_os: float


def oscillation_energy_split(delta_m: float, E: float, regime: Regime, units: UnitSystem = CGS) -> EnergySplit:
    """Energy split of two mass states and the oscillation half-period pi hbar / delta_E."""
    if delta_m < 0:
        raise DomainError(f"delta_m must be non-negative, got {delta_m}")
    _positive(E=E)
    rest = delta_m * units.c**2

    if regime == "non_relativistic":
        delta_E = rest
    elif regime == "ultra_relativistic":
        if E < ULTRA_RELATIVISTIC_MARGIN * rest:
            logger.warning("E = %.3g is not >> delta_m c^2 = %.3g; ultra-relativistic form is unreliable", E, rest)
        delta_E = rest**2 / E
    else:
        raise DomainError(f"unknown regime {regime!r}")

    if delta_E == 0:
        logger.warning("zero energy split: no oscillations, half-period is infinite")
        return EnergySplit(0.0, math.inf)
    return EnergySplit(delta_E, math.pi * units.hbar / delta_E)


def lifetime_tau_bound(T_observed: float) -> float:
    """Every observed lifetime exceeds tau, so tau < T_observed."""
    _positive(T_observed=T_observed)
    return T_observed


def aharonov_bohm_time(tau: float, potential_energy: float, units: UnitSystem = CGS) -> float:
    """Decoherence time (pi hbar)^2 / (tau (eV)^2) of two paths held at potential difference V."""
    return decoherence_time(tau, potential_energy, units)


@dataclass(frozen=True)
class OscillationPreset:
    name: str
    t_os: float
    t_f: float
    note: str


# Assumed inputs chosen to reproduce the quoted bounds; they are not measured values.
PRESETS = {
    "meson": OscillationPreset(
        "meson", t_os=5.9e-10, t_f=3.5e-8, note="assumption: gives tau < ~1e-11 s"
    ),
    "neutrino": OscillationPreset(
        "neutrino", t_os=1e-6, t_f=1e-5, note="assumption: gives tau < ~1e-7 s"
    ),
}


def preset_bounds(name: str) -> OscillationBounds:
    try:
        preset = PRESETS[name]
    except KeyError:
        raise DomainError(f"unknown preset {name!r}; expected one of {sorted(PRESETS)}") from None
    return oscillation_bounds(preset.t_os, preset.t_f)
