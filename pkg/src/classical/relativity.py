import math
from dataclasses import dataclass

from src.errors import DomainError


@dataclass(frozen=True)
class RelativisticParams:
    """Rest-frame time scale tau0 of a particle moving with speed v."""

    tau0: float
    v: float
    c: float

    def __post_init__(self):
        if not (self.tau0 > 0 and self.c > 0):
            raise DomainError(f"tau0 and c must be positive, got {self.tau0}, {self.c}")
        if abs(self.v) >= self.c:
            raise DomainError(f"|v| = {abs(self.v)} must be below c = {self.c}")

    @property
    def lorentz_factor(self) -> float:
        return 1.0 / math.sqrt(1.0 - (self.v / self.c) ** 2)


def relativistic_tau(params: RelativisticParams) -> float:
    """tau = tau0 / sqrt(1 - v^2/c^2)"""
    return params.tau0 * params.lorentz_factor


def proper_time_relations(u: float, s: float, D_zeta: float) -> tuple[float, float]:
    """
    Map proper time s and its dispersion D_zeta to laboratory time and dispersion.

    u is the time component of the 4-velocity; t = u s and D_theta = u^2 D_zeta.
    """
    if u < 1:
        raise DomainError(f"u must be >= 1, got {u}")
    return u * s, u**2 * D_zeta
