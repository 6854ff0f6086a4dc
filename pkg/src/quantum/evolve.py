"""
evolve.py

The three evolution routes for a density matrix:

1) evolve_unitary: exact von Neumann evolution to a fixed microscopic time theta
2) evolve_analytic: closed-form average over theta, elementwise in the energy basis
3) evolve_ode: RK4 integration of the averaged master equation, either the full
   generator (evaluated elementwise in the energy basis) or its second-order
   truncation (commutators in the input basis)
"""

import logging
import math

import numpy as np

from src import config
from src.errors import DomainError, PositivityError, StepSizeError
from src.quantum.entropy import entropy, purity
from src.quantum.states import DensityMatrix, EvolutionTrajectory, Hamiltonian, check_dims
from src.timing.time_models import TimeModel, macro_char_fn
from src.units import NATURAL, UnitSystem

logger = logging.getLogger(__name__)

FORMS = ("full", "second_order")


def evolve_unitary(rho0: DensityMatrix, H: Hamiltonian, theta: float, units: UnitSystem = NATURAL) -> DensityMatrix:
    """exp(-iH theta/hbar) rho0 exp(iH theta/hbar), computed in the eigenbasis."""
    check_dims(rho0, H)
    phases = np.exp(-1j * H.gaps() * (theta / units.hbar))
    out = H.from_energy_basis(H.to_energy_basis(rho0.data) * phases)
    return DensityMatrix.from_array(out)


def averaging_factors(H: Hamiltonian, model: TimeModel, t: float, units: UnitSystem = NATURAL) -> np.ndarray:
    """E[exp(-i omega_kl theta)] for every pair of levels; exactly 1 where E_k = E_l."""
    gaps = H.gaps()
    factors = macro_char_fn(model, -gaps / units.hbar, t)
    return np.where(gaps == 0, 1.0 + 0j, factors)


def evolve_analytic(
    R0: DensityMatrix, H: Hamiltonian, model: TimeModel, t: float, units: UnitSystem = NATURAL
) -> DensityMatrix:
    check_dims(R0, H)
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    Re = H.to_energy_basis(R0.data) * averaging_factors(H, model, t, units)
    return DensityMatrix.from_array(H.from_energy_basis(Re))


def evolve_analytic_trajectory(
    R0: DensityMatrix, H: Hamiltonian, model: TimeModel, times, units: UnitSystem = NATURAL
) -> EvolutionTrajectory:
    times = np.asarray(times, dtype=float)
    states = tuple(evolve_analytic(R0, H, model, float(t), units) for t in times)
    return EvolutionTrajectory(
        times=times,
        states=states,
        entropy=np.array([entropy(s) for s in states]),
        purity=np.array([purity(s) for s in states]),
    )


def decay_rate(model: TimeModel, omega: float) -> float:
    """Exponential decay rate of an off-diagonal element with Bohr frequency omega."""
    if not model.is_semigroup:
        raise DomainError("decay rate is time-independent only for poisson and gaussian time")
    if model.family == "gaussian":
        return 0.5 * model.kappa * omega**2 * model.tau
    phi = model.increments.char_fn(-omega * model.tau)
    return float((1.0 - phi.real) / model.tau)


def decoherence_factor(model: TimeModel, delta_E: float, units: UnitSystem = NATURAL) -> float:
    """The dimensionless a in |R_kl(t)| = |R_kl(0)| exp(-a tau delta_E^2 t / hbar^2)."""
    omega = delta_E / units.hbar
    if omega == 0:
        raise DomainError("decoherence factor is undefined for a zero energy gap")
    return decay_rate(model, omega) / (model.tau * omega**2)


def max_step(H: Hamiltonian, model: TimeModel, units: UnitSystem = NATURAL) -> float:
    scale = units.hbar / H.norm_max if H.norm_max > 0 else math.inf
    return min(model.tau, scale) / 10.0


def _rk4_step(rhs, R: np.ndarray, h: float) -> np.ndarray:
    k1 = rhs(R)
    k2 = rhs(R + 0.5 * h * k1)
    k3 = rhs(R + 0.5 * h * k2)
    k4 = rhs(R + h * k3)
    return R + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _full_rhs(H: Hamiltonian, model: TimeModel, units: UnitSystem):
    omega = H.gaps() / units.hbar
    if model.family == "gaussian":
        G = -1j * omega - 0.5 * model.kappa * omega**2 * model.tau
    else:
        G = (model.increments.char_fn(-omega * model.tau) - 1.0) / model.tau
    G = np.where(omega == 0, 0.0, G)
    return lambda R: G * R


def _second_order_rhs(H: Hamiltonian, model: TimeModel, units: UnitSystem):
    h = H.matrix
    mu = 1.0 if model.family == "gaussian" else model.increments.mean
    drift = mu / units.hbar
    diffusion = 0.5 * model.effective_a2 * model.tau / units.hbar**2

    def rhs(R):
        comm = h @ R - R @ h
        double = h @ comm - comm @ h
        return -1j * drift * comm - diffusion * double

    return rhs


def evolve_ode(
    R0: DensityMatrix,
    H: Hamiltonian,
    model: TimeModel,
    t: float,
    dt: float,
    form: str = "full",
    units: UnitSystem = NATURAL,
    record_every: int = 1,
) -> EvolutionTrajectory:
    """
    Integrate the averaged master equation from 0 to t with classic RK4.

    The step is shrunk to t / ceil(t / dt) so the last output lands on t.
    States are re-Hermitized and trace-renormalized after every step.
    """
    check_dims(R0, H)
    if form not in FORMS:
        raise DomainError(f"form must be one of {FORMS}, got {form!r}")
    if not model.is_semigroup:
        raise DomainError(f"master equation needs a poisson or gaussian time model, got {model.family}")
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    limit = max_step(H, model, units)
    if not 0 < dt <= limit * (1 + 1e-12):
        raise StepSizeError(f"dt = {dt:.6g} must be in (0, {limit:.6g}] (min(tau, hbar/|H|max)/10)")

    n_steps = math.ceil(t / dt - 1e-9) if t > 0 else 0
    h = t / n_steps if n_steps else 0.0

    # the full form is diagonal in the energy basis
    if form == "full":
        rhs = _full_rhs(H, model, units)
        R = H.to_energy_basis(R0.data)
        to_lab = H.from_energy_basis
    else:
        rhs = _second_order_rhs(H, model, units)
        R = np.array(R0.data)
        to_lab = np.asarray

    times, states = [0.0], [R0]
    clamped = 0
    for step in range(1, n_steps + 1):
        R = _rk4_step(rhs, R, h)
        R = 0.5 * (R + R.conj().T)
        R = R / np.trace(R).real

        if step % record_every and step != n_steps:
            continue
        lab = to_lab(R)
        lam, vecs = np.linalg.eigh(0.5 * (lab + lab.conj().T))
        lowest = lam[0]
        if lowest < config.POSITIVITY_ABORT:
            raise PositivityError(
                f"min eigenvalue {lowest:.3g} at t = {step * h:.6g} (step {step}, form={form}, dt={h:.3g})"
            )
        if lowest < -config.PSD_TOL:
            if form == "full":
                raise PositivityError(f"full master equation lost positivity: min eigenvalue {lowest:.3g}")
            lab = (vecs * np.clip(lam, 0.0, None)) @ vecs.conj().T
            clamped += 1
        times.append(step * h)
        states.append(DensityMatrix.from_array(lab))

    if clamped:
        logger.warning("clamped negative eigenvalues at %d output step(s) (form=%s)", clamped, form)

    times = np.array(times)
    if n_steps:
        times[-1] = t
    return EvolutionTrajectory(
        times=times,
        states=tuple(states),
        entropy=np.array([entropy(s) for s in states]),
        purity=np.array([purity(s) for s in states]),
        clamped_steps=clamped,
    )
