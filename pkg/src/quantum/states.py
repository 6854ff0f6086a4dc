"""
states.py

Value types of the quantum engine: density matrices, Hamiltonians with a cached
eigendecomposition, and evolution trajectories.
"""

from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.linalg import eigh

from src import config
from src.errors import DimensionMismatchError, InvalidStateError


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite complex matrix of dimension <= 64."""

    data: np.ndarray

    def __post_init__(self):
        a = _frozen(self.data)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InvalidStateError(f"density matrix must be square, got shape {a.shape}")
        if not 1 <= a.shape[0] <= config.MAX_DIM:
            raise InvalidStateError(f"dimension must be in [1, {config.MAX_DIM}], got {a.shape[0]}")
        if not np.all(np.isfinite(a)):
            raise InvalidStateError("density matrix has non-finite entries")
        asym = np.max(np.abs(a - a.conj().T))
        if asym > config.HERMITIAN_TOL:
            raise InvalidStateError(f"density matrix is not Hermitian (max |R - R^+| = {asym:.3g})")
        trace = np.trace(a).real
        if abs(trace - 1.0) > config.TRACE_TOL:
            raise InvalidStateError(f"trace = {trace:.15g}, expected 1")
        lowest = np.linalg.eigvalsh(a)[0]
        if lowest < -config.PSD_TOL:
            raise InvalidStateError(f"density matrix is not positive semidefinite (min eigenvalue {lowest:.3g})")
        object.__setattr__(self, "data", a)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @classmethod
    def pure(cls, amplitudes) -> "DensityMatrix":
        psi = np.asarray(amplitudes, dtype=complex)
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise InvalidStateError("state vector is zero")
        psi = psi / norm
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def diagonal(cls, populations) -> "DensityMatrix":
        return cls(np.diag(np.asarray(populations, dtype=float)).astype(complex))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=complex) / dim)

    @classmethod
    def from_array(cls, a) -> "DensityMatrix":
        """Wrap an integrator output after re-Hermitizing and renormalizing the trace."""
        a = np.asarray(a, dtype=complex)
        a = 0.5 * (a + a.conj().T)
        return cls(a / np.trace(a).real)

    def eigvalsh(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.data)

    def __getitem__(self, idx):
        return self.data[idx]


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """Hermitian matrix (energy units) with its eigendecomposition cached at construction."""

    matrix: np.ndarray
    energies: np.ndarray = field(init=False, repr=False)
    eigvecs: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        h = _frozen(self.matrix)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise InvalidStateError(f"Hamiltonian must be square, got shape {h.shape}")
        if not 1 <= h.shape[0] <= config.MAX_DIM:
            raise InvalidStateError(f"dimension must be in [1, {config.MAX_DIM}], got {h.shape[0]}")
        scale = max(np.max(np.abs(h)), 1.0)
        if np.max(np.abs(h - h.conj().T)) > config.HERMITIAN_TOL * scale:
            raise InvalidStateError("Hamiltonian is not Hermitian")

        energies, vecs = eigh(h)
        residual = np.max(np.abs(h @ vecs - vecs * energies))
        if residual > 1e-10 * max(np.max(np.abs(h)), np.finfo(float).tiny):
            raise InvalidStateError(f"eigendecomposition residual {residual:.3g} too large")

        energies.setflags(write=False)
        vecs.setflags(write=False)
        object.__setattr__(self, "matrix", h)
        object.__setattr__(self, "energies", energies)
        object.__setattr__(self, "eigvecs", vecs)

    @classmethod
    def from_energies(cls, energies) -> "Hamiltonian":
        return cls(np.diag(np.asarray(energies, dtype=float)).astype(complex))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def norm_max(self) -> float:
        return float(np.max(np.abs(self.matrix)))

    def gaps(self) -> np.ndarray:
        """E_k - E_l for every pair, indexed [k, l]."""
        return np.subtract.outer(self.energies, self.energies)

    def to_energy_basis(self, a: np.ndarray) -> np.ndarray:
        v = self.eigvecs
        return v.conj().T @ a @ v

    def from_energy_basis(self, a: np.ndarray) -> np.ndarray:
        v = self.eigvecs
        return v @ a @ v.conj().T


def check_dims(rho: DensityMatrix, H: Hamiltonian):
    if rho.dim != H.dim:
        raise DimensionMismatchError(f"state has dimension {rho.dim}, Hamiltonian {H.dim}")


@dataclass(frozen=True, eq=False)
class EvolutionTrajectory:
    times: np.ndarray
    states: tuple[DensityMatrix, ...]
    entropy: np.ndarray
    purity: np.ndarray
    clamped_steps: int = 0

    def __post_init__(self):
        n = len(self.times)
        if not (len(self.states) == len(self.entropy) == len(self.purity) == n):
            raise DimensionMismatchError("trajectory fields must have equal length")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final(self) -> DensityMatrix:
        return self.states[-1]

    def element(self, k: int, l: int) -> np.ndarray:
        return np.array([s.data[k, l] for s in self.states])

    def stack(self) -> np.ndarray:
        return np.stack([s.data for s in self.states])

    def to_frame(self, elements: list[tuple[int, int]]) -> pd.DataFrame:
        """Columns t, entropy, purity, then Re_Rkl / Im_Rkl per requested element."""
        cols = {"t": np.asarray(self.times, dtype=float), "entropy": self.entropy, "purity": self.purity}
        for k, l in elements:
            values = self.element(k, l)
            cols[f"Re_R{k}{l}"] = values.real
            cols[f"Im_R{k}{l}"] = values.imag
        return pd.DataFrame(cols)
