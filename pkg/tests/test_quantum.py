import numpy as np
import pytest

from src.errors import DimensionMismatchError, DomainError, InvalidStateError, StepSizeError
from src.quantum import (
    DensityMatrix,
    Hamiltonian,
    decay_rate,
    decoherence_factor,
    evolve_analytic,
    evolve_analytic_trajectory,
    evolve_ode,
    evolve_unitary,
)
from src.timing import IncrementDensity, TimeModel


# States


@pytest.mark.parametrize(
    "data, message",
    [
        (np.array([[0.5, 0.3], [0.1, 0.5]]), "Hermitian"),
        (np.eye(2), "trace"),
        (np.array([[1.5, 0.0], [0.0, -0.5]]), "positive semidefinite"),
        (np.ones((2, 3)) / 2, "square"),
    ],
)
def test_density_matrix_validation(data, message):
    with pytest.raises(InvalidStateError, match=message):
        DensityMatrix(data)


def test_density_matrix_dimension_limit():
    with pytest.raises(InvalidStateError, match="dimension"):
        DensityMatrix.maximally_mixed(65)


def test_density_matrix_is_read_only(two_level):
    _, rho = two_level
    with pytest.raises(ValueError):
        rho.data[0, 0] = 1.0


def test_hamiltonian_must_be_hermitian():
    with pytest.raises(InvalidStateError):
        Hamiltonian(np.array([[0.0, 1.0], [0.0, 1.0]]))


def test_hamiltonian_eigenbasis_round_trip():
    H = Hamiltonian(np.array([[0.0, 1.0], [1.0, 0.0]]))
    np.testing.assert_allclose(H.energies, [-1.0, 1.0])
    rho = DensityMatrix.diagonal([0.75, 0.25]).data
    np.testing.assert_allclose(H.from_energy_basis(H.to_energy_basis(rho)), rho, atol=1e-14)


def test_dimension_mismatch(two_level):
    H3 = Hamiltonian.from_energies([0, 1, 2])
    _, rho = two_level
    with pytest.raises(DimensionMismatchError):
        evolve_unitary(rho, H3, 1.0)


# Unitary and analytic routes


def test_unitary_identity_at_zero(three_level):
    H, rho = three_level
    np.testing.assert_allclose(evolve_unitary(rho, H, 0.0).data, rho.data, atol=1e-15)


def test_unitary_leaves_diagonal_states(three_level):
    H, _ = three_level
    rho = DensityMatrix.diagonal([0.2, 0.3, 0.5])
    np.testing.assert_allclose(evolve_unitary(rho, H, 3.7).data, rho.data, atol=1e-15)


def test_unitary_phase(two_level):
    H, rho = two_level
    assert evolve_unitary(rho, H, np.pi)[0, 1] == pytest.approx(-0.5, abs=1e-12)


def test_analytic_gaussian_decay(two_level):
    H, rho = two_level
    R = evolve_analytic(rho, H, TimeModel.gaussian(0.1, kappa=2.0), 1.0)
    assert abs(R[0, 1]) == pytest.approx(0.5 * np.exp(-0.1), abs=1e-12)
    assert abs(R[0, 1]) == pytest.approx(0.45242, abs=1e-5)


def test_analytic_poisson_decay_and_phase(two_level):
    H, rho = two_level
    R = evolve_analytic(rho, H, TimeModel.poisson(1.0), 1.0)
    assert abs(R[0, 1]) == pytest.approx(0.30327, abs=1e-5)
    # unitary phase of R01 is +t for E0 < E1; averaging shifts it to +0.5
    assert np.angle(R[0, 1]) == pytest.approx(0.5, abs=1e-12)


def test_degenerate_levels_unchanged():
    H = Hamiltonian.from_energies([0.0, 0.0, 1.0])
    rho = DensityMatrix.pure([1.0, 1.0, 1.0])
    R = evolve_analytic(rho, H, TimeModel.poisson(0.3), 5.0)
    assert R[0, 1] == pytest.approx(rho[0, 1], abs=1e-14)
    assert abs(R[0, 2]) < abs(rho[0, 2])


def test_modular_harmonic_spectrum_is_frozen():
    tau = 0.1
    H = Hamiltonian.from_energies(np.arange(4) * 2 * np.pi / tau)
    rho = DensityMatrix.pure([1.0, 0.5, 0.25j, 1.0])
    for t in (0.05, 1.0, 13.3):
        np.testing.assert_allclose(evolve_analytic(rho, H, TimeModel.modular(tau), t).data, rho.data, atol=1e-9)


@pytest.mark.parametrize("levels", [2, 5])
def test_modular_harmonic_spectrum_frozen_at_sampled_times(levels):
    tau = 0.1
    H = Hamiltonian.from_energies(np.arange(levels) * 2 * np.pi / tau)
    rho = DensityMatrix.pure(np.exp(1j * np.arange(levels)) / (1 + np.arange(levels)))
    model = TimeModel.modular(tau)
    for t in np.random.default_rng(50).uniform(0.0, 20.0, 50):
        R = evolve_analytic(rho, H, model, float(t))
        assert np.max(np.abs(R.data - rho.data)) <= 1e-10, t


def test_analytic_preserves_populations(three_level):
    H, rho = three_level
    traj = evolve_analytic_trajectory(rho, H, TimeModel.poisson(0.2), np.linspace(0, 10, 11))
    diag = np.real(np.einsum("tii->ti", traj.stack()))
    np.testing.assert_allclose(diag, np.tile(np.real(np.diag(rho.data)), (11, 1)), atol=1e-12)
    assert np.all(np.diff(traj.entropy) >= -1e-12)


def test_analytic_negative_time(two_level):
    H, rho = two_level
    with pytest.raises(DomainError):
        evolve_analytic(rho, H, TimeModel.poisson(0.1), -1.0)


def test_tau_to_zero_error_is_linear(two_level):
    H, rho = two_level
    t = 2.0
    exact = evolve_unitary(rho, H, t).data
    errors = [
        np.max(np.abs(evolve_analytic(rho, H, TimeModel.poisson(tau), t).data - exact)) for tau in (1e-2, 1e-3, 1e-4)
    ]
    ratios = np.array(errors[:-1]) / np.array(errors[1:])
    assert np.all((ratios > 8) & (ratios < 12))


# Decay constants


def test_gaussian_decoherence_factor_is_one():
    assert decoherence_factor(TimeModel.gaussian(0.1, kappa=2.0), 1.0) == pytest.approx(1.0)


def test_poisson_decay_rate():
    tau, omega = 0.1, 2.0
    assert decay_rate(TimeModel.poisson(tau), omega) == pytest.approx(omega**2 * tau / (1 + (omega * tau) ** 2))


@pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 2.0])
def test_fitted_poisson_decay_rate(two_level, x):
    # delta_E = hbar = 1, so x is delta_E tau / hbar
    H, rho = two_level
    expected = x / (1 + x**2)
    times = np.linspace(0.0, 3.0 / expected, 30)
    traj = evolve_analytic_trajectory(rho, H, TimeModel.poisson(x), times)
    magnitude = np.abs(traj.stack()[:, 0, 1])
    slope, _ = np.polyfit(times, np.log(magnitude), 1)
    assert -slope == pytest.approx(expected, rel=0.01)


def test_decay_rate_needs_semigroup():
    model = TimeModel.modified_poisson(0.1, IncrementDensity.exponential(), IncrementDensity.exponential())
    with pytest.raises(DomainError):
        decay_rate(model, 1.0)


def test_decoherence_factor_zero_gap():
    with pytest.raises(DomainError):
        decoherence_factor(TimeModel.poisson(0.1), 0.0)


# Master equation


def test_ode_matches_von_neumann_for_tiny_tau():
    H = Hamiltonian(np.array([[0.0, 1.0], [1.0, 0.5]]))
    rho = DensityMatrix.pure([1.0, 0.0])
    tau = 1e-6 / H.norm_max
    t = 1e-4
    for form in ("full", "second_order"):
        traj = evolve_ode(rho, H, TimeModel.poisson(tau), t, dt=tau / 10, form=form, record_every=100)
        assert traj.times[-1] == t
        np.testing.assert_allclose(traj.final.data, evolve_unitary(rho, H, t).data, atol=1e-4)


def test_second_order_matches_gaussian_analytic(two_level):
    H, rho = two_level
    model = TimeModel.gaussian(0.1, kappa=2.0)
    traj = evolve_ode(rho, H, model, 1.0, dt=0.01, form="second_order")
    np.testing.assert_allclose(traj.final.data, evolve_analytic(rho, H, model, 1.0).data, atol=1e-6)


@pytest.mark.parametrize("model", [TimeModel.poisson(0.1), TimeModel.gaussian(0.1, kappa=1.0)], ids=["poisson", "gaussian"])
def test_full_form_matches_analytic(three_level, model):
    H, rho = three_level
    traj = evolve_ode(rho, H, model, 2.0, dt=0.004, form="full", record_every=50)
    expected = evolve_analytic_trajectory(rho, H, model, traj.times)
    np.testing.assert_allclose(traj.stack(), expected.stack(), atol=1e-8)


def test_diagonal_state_is_fixed_point(three_level):
    H, _ = three_level
    rho = DensityMatrix.diagonal([0.5, 0.3, 0.2])
    traj = evolve_ode(rho, H, TimeModel.poisson(0.1), 1.0, dt=0.01, form="second_order")
    np.testing.assert_allclose(traj.stack() - rho.data, 0.0, atol=1e-13)


def test_ode_trace_and_hermiticity(three_level):
    H, rho = three_level
    traj = evolve_ode(rho, H, TimeModel.poisson(0.1, IncrementDensity.gamma(2.0)), 3.0, dt=0.004)
    for state in traj.states:
        assert np.trace(state.data).real == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(state.data, state.data.conj().T, atol=1e-14)


def test_ode_step_guard(two_level):
    H, rho = two_level
    with pytest.raises(StepSizeError):
        evolve_ode(rho, H, TimeModel.poisson(0.1), 1.0, dt=0.05)


def test_ode_needs_semigroup(two_level):
    H, rho = two_level
    model = TimeModel.modified_poisson(0.1, IncrementDensity.exponential(), IncrementDensity.exponential())
    with pytest.raises(DomainError):
        evolve_ode(rho, H, model, 1.0, dt=0.001)


def test_ode_unknown_form(two_level):
    H, rho = two_level
    with pytest.raises(DomainError):
        evolve_ode(rho, H, TimeModel.poisson(0.1), 1.0, dt=0.001, form="third_order")


def test_ode_last_time_lands_on_t(two_level):
    H, rho = two_level
    traj = evolve_ode(rho, H, TimeModel.poisson(0.1), 0.1234, dt=0.01)
    assert traj.times[-1] == 0.1234
    assert len(traj) == 14


def test_trajectory_frame_columns(two_level):
    H, rho = two_level
    traj = evolve_analytic_trajectory(rho, H, TimeModel.poisson(0.1), [0.0, 1.0])
    frame = traj.to_frame([(0, 1), (1, 1)])
    assert list(frame.columns) == ["t", "entropy", "purity", "Re_R01", "Im_R01", "Re_R11", "Im_R11"]
    assert frame["Re_R01"].iloc[0] == pytest.approx(0.5)
