"""
entropy.py

Von Neumann entropy, its rate of change under averaged evolution, and the
rearrangement inequality that makes that rate non-negative.

For a semigroup time model the entropy rate is computed in the basis that
diagonalizes R. Gaussian time uses the double-commutator form
    dS/dt = (kappa tau / 2 hbar^2) sum_kj |H_kj|^2 (l_k - l_j) ln(l_k / l_j)
and generalized Poisson time uses the expected doubly stochastic matrix
A_kj = E|Q_kj|^2 of the random unitary Q = W^+ exp(-i H xi tau / hbar) W,
    dS/dt = (1/tau) [sum_kj A_kj l_j y_k - sum_k l_k y_k],   y = -ln l.
"""

import itertools
import logging

import numpy as np
from scipy.linalg import eigh
from scipy.special import entr

from src import config
from src.errors import DomainError, LemmaPreconditionError
from src.quantum.states import DensityMatrix, Hamiltonian, check_dims
from src.timing.time_models import TimeModel
from src.units import NATURAL, UnitSystem

logger = logging.getLogger(__name__)

LEMMA_STOCHASTIC_TOL = 1e-9
LEMMA_TOL = 1e-12


def entropy(R: DensityMatrix) -> float:
    """S = -Tr(R ln R) in nats; eigenvalues below 1e-15 contribute 0."""
    lam = R.eigvalsh()
    lam = np.where(lam < config.ENTROPY_EIG_FLOOR, 0.0, lam)
    return float(np.sum(entr(lam)))


def purity(R: DensityMatrix) -> float:
    return float(np.sum(np.abs(R.data) ** 2))


def _rate_eigenvalues(lam: np.ndarray) -> np.ndarray:
    small = lam < config.ENTROPY_RATE_EIG_FLOOR
    if small.any():
        logger.warning(
            "clamping %d eigenvalue(s) below %.0e to evaluate ln R", int(small.sum()), config.ENTROPY_RATE_EIG_FLOOR
        )
        lam = np.where(small, config.ENTROPY_RATE_EIG_FLOOR, lam)
    return lam


def expected_transition_matrix(R: DensityMatrix, H: Hamiltonian, model: TimeModel, units: UnitSystem = NATURAL):
    """E|Q_kj|^2 in the eigenbasis of R, together with the eigenvalues of R."""
    lam, W = eigh(R.data)
    M = H.eigvecs.conj().T @ W
    phi = model.increments.char_fn(-H.gaps() * model.tau / units.hbar)
    A = np.einsum("mk,mj,nk,nj,mn->kj", M.conj(), M, M, M.conj(), phi, optimize=True)
    return A.real, lam


def entropy_rate(R: DensityMatrix, H: Hamiltonian, model: TimeModel, units: UnitSystem = NATURAL) -> float:
    check_dims(R, H)
    if not model.is_semigroup:
        raise DomainError(f"entropy_rate needs a poisson or gaussian time model, got {model.family}")

    if model.family == "gaussian":
        lam, W = eigh(R.data)
        lam = _rate_eigenvalues(lam)
        Hr = W.conj().T @ H.matrix @ W
        dl = np.subtract.outer(lam, lam)
        dlog = np.subtract.outer(np.log(lam), np.log(lam))
        rate = 0.5 * model.kappa * model.tau / units.hbar**2 * np.sum(np.abs(Hr) ** 2 * dl * dlog)
    else:
        A, lam = expected_transition_matrix(R, H, model, units)
        lam = _rate_eigenvalues(lam)
        y = -np.log(lam)
        rate = (y @ A @ lam - lam @ y) / model.tau

    rate = float(rate)
    if rate < -1e-10:
        logger.warning("entropy rate %.3g is negative beyond round-off", rate)
    return rate


# Rearrangement lemma


def _check_lemma_inputs(A, x, y):
    A = np.asarray(A, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    if A.shape != (n, n) or y.size != n:
        raise LemmaPreconditionError(f"shape mismatch: A {A.shape}, x {x.shape}, y {y.shape}")
    if np.any(A < 0):
        raise LemmaPreconditionError("A has negative entries")
    rows = np.max(np.abs(A.sum(axis=1) - 1.0))
    cols = np.max(np.abs(A.sum(axis=0) - 1.0))
    if max(rows, cols) > LEMMA_STOCHASTIC_TOL:
        raise LemmaPreconditionError(f"A is not doubly stochastic (row error {rows:.3g}, column error {cols:.3g})")
    if np.any(x <= 0) or np.any(np.diff(x) > 0):
        raise LemmaPreconditionError("x must be positive and non-increasing")
    if np.any(y <= 0) or np.any(np.diff(y) < 0):
        raise LemmaPreconditionError("y must be positive and non-decreasing")
    return A, x, y


def lemma_check(A, x, y) -> bool:
    """sum_kj A_kj x_j y_k >= sum_k x_k y_k for doubly stochastic A and oppositely ordered x, y."""
    A, x, y = _check_lemma_inputs(A, x, y)
    lhs = y @ A @ x
    rhs = x @ y
    return bool(lhs >= rhs - LEMMA_TOL)


def brute_force_lemma_minimum(x, y) -> float:
    """Minimum of sum_k x_pi(k) y_k over all permutations; the vertices of the doubly stochastic polytope."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size > 8:
        raise LemmaPreconditionError(f"exhaustive search limited to dim <= 8, got {x.size}")
    return float(min(x[list(p)] @ y for p in itertools.permutations(range(x.size))))


def random_doubly_stochastic(rng: np.random.Generator, dim: int, n_terms: int | None = None) -> np.ndarray:
    """Convex mixture of random permutation matrices."""
    n_terms = n_terms or dim + 1
    weights = rng.dirichlet(np.ones(n_terms))
    A = np.zeros((dim, dim))
    eye = np.eye(dim)
    for w in weights:
        A += w * eye[rng.permutation(dim)]
    return A
