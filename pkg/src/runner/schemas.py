"""
schemas.py

pydantic models for scenario files and run summaries.

A scenario file is a set of [section] blocks; each block maps onto one of the
section models below and ScenarioConfig ties them together. Requirements that
depend on the scenario kind (which sections must be present) are checked in
ScenarioConfig's model validator.
"""

import hashlib
from pathlib import Path
from typing import Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, field_validator, model_validator

from src.errors import ConfigError, ConfigIssue, DimensionMismatchError
from src.quantum.states import DensityMatrix, Hamiltonian
from src.timing.increments import IncrementDensity
from src.timing.time_models import SamplerConfig, TimeModel
from src.units import UnitSystem, get_units

ScenarioKind = Literal[
    "quantum_evolve",
    "quantum_oracle_compare",
    "entropy_audit",
    "decay_law",
    "classical_pde",
    "classical_mc",
    "wavepacket",
    "estimate",
    "lemma_fuzz",
]
IncrementKind = Literal["exponential", "gamma", "deterministic", "tabulated"]


def _split_list(value):
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


def _existing(path: Path | None) -> Path | None:
    if path is not None and not path.is_file():
        raise ValueError(f"file not found: {path}")
    return path


class Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ScenarioSection(Section):
    kind: ScenarioKind
    name: str = "scenario"


class ModelSection(Section):
    family: Literal["poisson", "modular", "gaussian", "modified_poisson"] = "poisson"
    tau: PositiveFloat
    increments: IncrementKind = "exponential"
    order: PositiveFloat = 2.0
    mean_normalized: bool = False
    kappa: PositiveFloat = 2.0
    initial: IncrementKind | None = None
    initial_order: PositiveFloat = 2.0
    tabulated_file: Path | None = None

    @field_validator("tabulated_file")
    @classmethod
    def file_exists(cls, value):
        return _existing(value)

    @model_validator(mode="after")
    def family_needs(self):
        if self.family == "modified_poisson" and self.initial is None:
            raise ValueError("family = modified_poisson needs an 'initial' increment kind")
        if "tabulated" in (self.increments, self.initial) and self.tabulated_file is None:
            raise ValueError("tabulated increments need 'tabulated_file'")
        return self

    def _density(self, kind: str, order: float) -> IncrementDensity:
        if kind == "gamma":
            return IncrementDensity.gamma(order, mean_normalized=self.mean_normalized)
        if kind == "tabulated":
            table = pd.read_csv(self.tabulated_file)
            return IncrementDensity.tabulated(table.iloc[:, 0].to_numpy(), table.iloc[:, 1].to_numpy())
        return getattr(IncrementDensity, kind)()

    def build(self) -> TimeModel:
        if self.family == "modular":
            return TimeModel.modular(self.tau)
        if self.family == "gaussian":
            return TimeModel.gaussian(self.tau, self.kappa)
        increments = self._density(self.increments, self.order)
        if self.family == "modified_poisson":
            return TimeModel.modified_poisson(self.tau, increments, self._density(self.initial, self.initial_order))
        return TimeModel.poisson(self.tau, increments)


class SystemSection(Section):
    energies: list[float] | None = None
    hamiltonian_file: Path | None = None
    initial_state: Literal["superposition", "ground", "maximally_mixed", "amplitudes", "populations"] = "superposition"
    amplitudes: list[float] | None = None
    populations: list[float] | None = None
    elements: list[tuple[int, int]] = Field(default_factory=lambda: [(0, 1)])
    mixing: float = Field(default=0.0, ge=0, le=1)

    @field_validator("energies", "amplitudes", "populations", mode="before")
    @classmethod
    def split_lists(cls, value):
        return _split_list(value)

    @field_validator("hamiltonian_file")
    @classmethod
    def file_exists(cls, value):
        return _existing(value)

    @field_validator("elements", mode="before")
    @classmethod
    def parse_elements(cls, value):
        if isinstance(value, str):
            pairs = []
            for item in _split_list(value):
                k, sep, l = item.partition(":")
                if not sep:
                    raise ValueError(f"element {item!r} must look like k:l")
                pairs.append((int(k), int(l)))
            return pairs
        return value

    @model_validator(mode="after")
    def one_hamiltonian(self):
        if (self.energies is None) == (self.hamiltonian_file is None):
            raise ValueError("give exactly one of 'energies' or 'hamiltonian_file'")
        if self.initial_state in ("amplitudes", "populations") and getattr(self, self.initial_state) is None:
            raise ValueError(f"initial_state = {self.initial_state} needs the '{self.initial_state}' key")
        return self

    @model_validator(mode="after")
    def fits_dimension(self):
        dim = self.dim
        for k, l in self.elements:
            if not (0 <= k < dim and 0 <= l < dim):
                raise ValueError(f"element {k}:{l} is outside the {dim}-level system")
        for key in ("amplitudes", "populations"):
            values = getattr(self, key)
            if values is not None and len(values) != dim:
                raise ValueError(f"'{key}' has {len(values)} entries, the Hamiltonian has dimension {dim}")
        return self

    @property
    def dim(self) -> int:
        if self.energies is not None:
            return len(self.energies)
        return self.hamiltonian().dim

    def hamiltonian(self) -> Hamiltonian:
        if self.energies is not None:
            return Hamiltonian.from_energies(self.energies)
        return Hamiltonian(np.loadtxt(self.hamiltonian_file, dtype=complex, delimiter=",", ndmin=2))

    def initial_density(self, H: Hamiltonian) -> DensityMatrix:
        """
        Initial state; superposition, ground and populations refer to energy
        eigenstates. mixing blends the state with the maximally mixed one.
        """
        if self.initial_state == "maximally_mixed":
            state = DensityMatrix.maximally_mixed(H.dim)
        elif self.initial_state == "amplitudes":
            state = DensityMatrix.pure(self.amplitudes)
        elif self.initial_state == "populations":
            if len(self.populations) != H.dim:
                raise DimensionMismatchError(f"{len(self.populations)} populations for a {H.dim}-level Hamiltonian")
            diag = DensityMatrix.diagonal(np.asarray(self.populations) / np.sum(self.populations))
            state = DensityMatrix.from_array(H.from_energy_basis(diag.data))
        else:
            weights = np.ones(H.dim) if self.initial_state == "superposition" else np.eye(H.dim)[0]
            state = DensityMatrix.pure(H.eigvecs @ weights)
        if state.dim != H.dim:
            raise DimensionMismatchError(f"initial state has dimension {state.dim}, Hamiltonian {H.dim}")
        if not self.mixing:
            return state
        return DensityMatrix.from_array((1 - self.mixing) * state.data + self.mixing * np.eye(H.dim) / H.dim)


class TimeSection(Section):
    t_start: float = Field(default=0.0, ge=0)
    t_end: float
    n_points: int = Field(default=11, ge=2)
    dt: PositiveFloat | None = None
    form: Literal["full", "second_order"] = "full"
    route: Literal["analytic", "ode"] = "analytic"

    @model_validator(mode="after")
    def increasing(self):
        if not self.t_end > self.t_start:
            raise ValueError(f"t_end ({self.t_end}) must be greater than t_start ({self.t_start})")
        return self

    def grid(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_points)


class SamplerSection(Section):
    seed: int = Field(ge=0, lt=2**64)
    n_samples: PositiveInt = 100_000

    def build(self, n_jobs: int | None = None) -> SamplerConfig:
        if n_jobs is None:
            return SamplerConfig(seed=self.seed, n_samples=self.n_samples)
        return SamplerConfig(seed=self.seed, n_samples=self.n_samples, n_jobs=n_jobs)


class UnitsSection(Section):
    system: Literal["natural", "cgs"] = "natural"

    def build(self) -> UnitSystem:
        return get_units(self.system)


class OutputsSection(Section):
    csv: Path | None = None
    summary: Path | None = None
    svg: Path | None = None


class ClassicalSection(Section):
    x0: float = 0.0
    v: float
    sigma0: PositiveFloat = 0.05
    x_min: float = -5.0
    x_max: float = 5.0
    n_cells: int = Field(default=2000, ge=64)
    dt: PositiveFloat | None = None
    coarsen: PositiveInt = 20
    compare_pde: bool = False

    @model_validator(mode="after")
    def domain(self):
        if not self.x_max > self.x_min:
            raise ValueError("x_max must be greater than x_min")
        return self


class WavepacketSection(Section):
    m: PositiveFloat
    delta_x: PositiveFloat
    x0: float = 0.0
    half_width: PositiveFloat = 10.0
    n_x: int = Field(default=401, ge=11)


class DecaySection(Section):
    lifetime: PositiveFloat


class LemmaSection(Section):
    n_instances: PositiveInt = 10_000
    max_dim: int = Field(default=6, ge=2, le=16)
    brute_force_dim: int = Field(default=4, ge=2, le=6)


class EstimateSection(Section):
    tau: PositiveFloat | None = None
    delta_E: PositiveFloat | None = None
    t: float | None = Field(default=None, ge=0)
    l: PositiveFloat | None = None
    tau0: PositiveFloat | None = None
    gamma: float | None = Field(default=None, gt=0, le=1)
    t_os: PositiveFloat | None = None
    t_f: PositiveFloat | None = None
    preset: Literal["meson", "neutrino"] | None = None
    delta_m: float | None = Field(default=None, ge=0)
    E: PositiveFloat | None = None
    regime: Literal["non_relativistic", "ultra_relativistic"] = "non_relativistic"
    T_observed: PositiveFloat | None = None
    potential_energy: PositiveFloat | None = None


# sections each kind cannot run without
REQUIRED_SECTIONS: dict[str, tuple[str, ...]] = {
    "quantum_evolve": ("model", "system", "time"),
    "quantum_oracle_compare": ("model", "system", "time", "sampler"),
    "entropy_audit": ("model", "system", "time"),
    "decay_law": ("model", "time", "decay"),
    "classical_pde": ("model", "time", "classical"),
    "classical_mc": ("model", "time", "classical", "sampler"),
    "wavepacket": ("model", "time", "wavepacket"),
    "estimate": ("estimate",),
    "lemma_fuzz": ("lemma", "sampler"),
}


class ScenarioConfig(Section):
    scenario: ScenarioSection
    model: ModelSection | None = None
    system: SystemSection | None = None
    time: TimeSection | None = None
    sampler: SamplerSection | None = None
    units: UnitsSection = Field(default_factory=UnitsSection)
    outputs: OutputsSection = Field(default_factory=OutputsSection)
    classical: ClassicalSection | None = None
    wavepacket: WavepacketSection | None = None
    decay: DecaySection | None = None
    lemma: LemmaSection | None = None
    estimate: EstimateSection | None = None

    @model_validator(mode="after")
    def kind_needs(self):
        kind = self.scenario.kind
        missing = [name for name in REQUIRED_SECTIONS[kind] if getattr(self, name) is None]
        if missing:
            raise ValueError(f"kind = {kind} needs section(s): {', '.join(f'[{m}]' for m in missing)}")
        if kind == "entropy_audit" and self.model.family not in ("poisson", "modular", "gaussian"):
            raise ValueError("entropy_audit needs a poisson, modular or gaussian model")
        needs_dt = kind == "entropy_audit" or (kind == "quantum_evolve" and self.time.route == "ode")
        if needs_dt and self.time.dt is None:
            raise ValueError("master-equation runs need 'dt' in [time]")
        if kind == "wavepacket" and self.time.t_start <= 0:
            raise ValueError("wavepacket needs t_start > 0")
        return self

    def with_seed(self, seed: int) -> "ScenarioConfig":
        if self.sampler is None:
            raise ConfigError([ConfigIssue(None, "--seed-override given but the scenario has no [sampler] section")])
        return self.model_copy(update={"sampler": self.sampler.model_copy(update={"seed": seed})})


class RunSummary(BaseModel):
    scenario: str
    kind: str
    scalars: dict[str, float]
    verdicts: dict[str, bool]
    thresholds: dict[str, float]
    passed: bool
    wall_clock: float
    version: str
    config_hash: str

    def to_text(self) -> str:
        lines = [
            f"scenario = {self.scenario}",
            f"kind = {self.kind}",
            f"passed = {str(self.passed).lower()}",
        ]
        lines += [f"scalar.{k} = {v:.17e}" for k, v in self.scalars.items()]
        lines += [f"threshold.{k} = {v:.17e}" for k, v in self.thresholds.items()]
        lines += [f"verdict.{k} = {'pass' if v else 'fail'}" for k, v in self.verdicts.items()]
        lines += [
            f"version = {self.version}",
            f"config_sha256 = {self.config_hash}",
        ]
        return "\n".join(lines) + "\n"


def config_hash(text: str, seed_override: int | None = None) -> str:
    payload = text if seed_override is None else f"{text}\n# seed_override = {seed_override}\n"
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()
