import numpy as np
import pytest

from src.errors import DomainError, LemmaPreconditionError
from src.quantum import (
    DensityMatrix,
    Hamiltonian,
    brute_force_lemma_minimum,
    entropy,
    entropy_rate,
    evolve_ode,
    lemma_check,
    purity,
    random_doubly_stochastic,
)
from src.quantum.entropy import expected_transition_matrix
from src.quantum.evolve import max_step
from src.timing import IncrementDensity, TimeModel
from src.timing.sampling import block_rng

SIGMA_X = Hamiltonian(np.array([[0.0, 1.0], [1.0, 0.0]]))


def test_entropy_values():
    assert entropy(DensityMatrix.pure([1.0, 1.0j])) == pytest.approx(0.0, abs=1e-12)
    assert entropy(DensityMatrix.maximally_mixed(2)) == pytest.approx(np.log(2))
    assert entropy(DensityMatrix.diagonal([0.25, 0.75])) == pytest.approx(0.562335, abs=1e-6)


def test_purity():
    assert purity(DensityMatrix.pure([1.0, 1.0])) == pytest.approx(1.0)
    assert purity(DensityMatrix.maximally_mixed(4)) == pytest.approx(0.25)


@pytest.mark.parametrize("model", [TimeModel.poisson(0.1), TimeModel.gaussian(0.1)], ids=["poisson", "gaussian"])
def test_rate_vanishes_for_stationary_mixture(model):
    H = Hamiltonian.from_energies([0.0, 1.0, 3.0])
    R = DensityMatrix.diagonal([0.2, 0.5, 0.3])
    assert entropy_rate(R, H, model) == pytest.approx(0.0, abs=1e-12)


def test_gaussian_rate_closed_form():
    rate = entropy_rate(DensityMatrix.diagonal([0.75, 0.25]), SIGMA_X, TimeModel.gaussian(0.1, kappa=2.0))
    assert rate == pytest.approx(0.1 * np.log(3))
    assert rate == pytest.approx(0.109861, abs=1e-6)


def test_rate_vanishes_as_tau_goes_to_zero():
    R = DensityMatrix.diagonal([0.75, 0.25])
    assert abs(entropy_rate(R, SIGMA_X, TimeModel.gaussian(1e-12))) < 1e-10
    coarse = entropy_rate(R, SIGMA_X, TimeModel.poisson(1e-3))
    fine = entropy_rate(R, SIGMA_X, TimeModel.poisson(1e-4))
    assert coarse == pytest.approx(1e-3 * np.log(3), rel=1e-3)
    assert 8 < coarse / fine < 12


@pytest.mark.parametrize(
    "model",
    [
        TimeModel.poisson(0.1),
        TimeModel.poisson(0.1, IncrementDensity.gamma(2.0)),
        TimeModel.modular(0.1),
        TimeModel.gaussian(0.1, kappa=1.0),
    ],
    ids=["exponential", "gamma", "modular", "gaussian"],
)
def test_rate_matches_finite_difference(model):
    H = Hamiltonian(np.array([[0.0, 1.0, 0.2], [1.0, 0.5, 0.0], [0.2, 0.0, 1.5]]))
    R0 = DensityMatrix.diagonal([0.6, 0.3, 0.1])
    h = 1e-3
    traj = evolve_ode(R0, H, model, 2 * h, dt=h, form="full")
    fd = (traj.entropy[2] - traj.entropy[0]) / (2 * h)
    rate = entropy_rate(traj.states[1], H, model)
    assert rate >= 0.0
    assert fd == pytest.approx(rate, rel=1e-3, abs=1e-6)


def test_expected_transition_matrix_is_doubly_stochastic():
    H = Hamiltonian(np.array([[0.0, 1.0], [1.0, 2.0]]))
    R = DensityMatrix.from_array(np.array([[0.7, 0.1 + 0.2j], [0.1 - 0.2j, 0.3]]))
    A, lam = expected_transition_matrix(R, H, TimeModel.poisson(0.3))
    np.testing.assert_allclose(A.sum(axis=0), 1.0, atol=1e-12)
    np.testing.assert_allclose(A.sum(axis=1), 1.0, atol=1e-12)
    assert np.all(A >= -1e-12)
    assert lam.sum() == pytest.approx(1.0)


def test_rate_rejects_modified_poisson():
    model = TimeModel.modified_poisson(0.1, IncrementDensity.exponential(), IncrementDensity.exponential())
    with pytest.raises(DomainError):
        entropy_rate(DensityMatrix.diagonal([0.5, 0.5]), SIGMA_X, model)


# Rearrangement lemma


def test_lemma_identity_is_equality():
    x, y = np.array([3.0, 2.0, 1.0]), np.array([1.0, 2.0, 5.0])
    assert lemma_check(np.eye(3), x, y)


def test_lemma_swap():
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert lemma_check(swap, [2.0, 1.0], [1.0, 2.0])


@pytest.mark.parametrize(
    "A, x, y, message",
    [
        (np.array([[1.2, -0.2], [-0.2, 1.2]]), [2.0, 1.0], [1.0, 2.0], "negative"),
        (np.array([[0.5, 0.5], [0.6, 0.4]]), [2.0, 1.0], [1.0, 2.0], "doubly stochastic"),
        (np.eye(2), [1.0, 2.0], [1.0, 2.0], "x must be"),
        (np.eye(2), [2.0, 1.0], [2.0, 1.0], "y must be"),
        (np.eye(2), [2.0, 0.0], [1.0, 2.0], "x must be"),
        (np.eye(3), [2.0, 1.0], [1.0, 2.0], "shape"),
    ],
)
def test_lemma_preconditions(A, x, y, message):
    with pytest.raises(LemmaPreconditionError, match=message):
        lemma_check(A, x, y)


def test_lemma_holds_on_random_instances():
    rng = block_rng(2024, 0)
    for _ in range(500):
        dim = int(rng.integers(2, 7))
        A = random_doubly_stochastic(rng, dim)
        np.testing.assert_allclose(A.sum(axis=0), 1.0, atol=1e-12)
        np.testing.assert_allclose(A.sum(axis=1), 1.0, atol=1e-12)
        x = np.sort(rng.uniform(0.1, 10.0, dim))[::-1]
        y = np.sort(rng.uniform(0.1, 10.0, dim))
        assert lemma_check(A, x, y)


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_brute_force_minimum_is_identity(dim):
    rng = block_rng(7, dim)
    for _ in range(20):
        x = np.sort(rng.uniform(0.1, 10.0, dim))[::-1]
        y = np.sort(rng.uniform(0.1, 10.0, dim))
        assert brute_force_lemma_minimum(x, y) == pytest.approx(x @ y, rel=1e-12)


def test_brute_force_limit():
    with pytest.raises(LemmaPreconditionError):
        brute_force_lemma_minimum(np.ones(9), np.ones(9))


def _random_system(rng):
    dim = int(rng.integers(2, 9))
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    H = Hamiltonian(0.5 * (A + A.conj().T))
    B = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    # full rank: smallest eigenvalue bounded away from zero
    R0 = DensityMatrix.from_array(B @ B.conj().T + 0.05 * dim * np.eye(dim))
    tau = float(rng.uniform(0.05, 0.5))
    model = TimeModel.poisson(tau) if rng.random() < 0.5 else TimeModel.gaussian(tau, kappa=float(rng.uniform(0.5, 2.0)))
    return H, R0, model


def test_random_systems_entropy_grows_and_rate_matches():
    for k in range(100):
        H, R0, model = _random_system(block_rng(2024, k))
        h = max_step(H, model) / 8
        traj = evolve_ode(R0, H, model, 8 * h, dt=h)
        S, t = traj.entropy, traj.times
        assert np.diff(S).min() >= -1e-9, f"system {k}"
        fd = (S[2:] - S[:-2]) / (t[2:] - t[:-2])
        rates = np.array([entropy_rate(s, H, model) for s in traj.states[1:-1]])
        assert np.all(rates >= -1e-12), f"system {k}"
        tol = np.maximum(1e-6, 1e-3 * np.abs(rates))
        assert np.all(np.abs(fd - rates) <= tol), f"system {k}: {np.abs(fd - rates).max():.3g}"


@pytest.mark.parametrize(
    "model", [TimeModel.poisson(0.1), TimeModel.gaussian(0.1, kappa=1.0)], ids=["poisson", "gaussian"]
)
def test_rate_at_degenerate_state(model):
    H = Hamiltonian(np.array([[0.0, 1.0, 0.2], [1.0, 0.5, 0.0], [0.2, 0.0, 1.5]]))
    R0 = DensityMatrix.diagonal([0.4, 0.4, 0.2])
    rate = entropy_rate(R0, H, model)
    h = 1e-4
    S = evolve_ode(R0, H, model, 2 * h, dt=h).entropy
    # second-order one-sided difference at t = 0
    fd = (-3 * S[0] + 4 * S[1] - S[2]) / (2 * h)
    assert rate > 0.0
    assert fd == pytest.approx(rate, rel=1e-3, abs=1e-6)
