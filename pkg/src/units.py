from dataclasses import dataclass

import scipy.constants as const

from src.errors import DomainError


@dataclass(frozen=True)
class UnitSystem:
    """Reduced Planck constant and speed of light in one consistent unit system.

    Every formula here is written with the reduced constant hbar, never h.
    """

    name: str
    hbar: float
    c: float

    def __post_init__(self):
        if not (self.hbar > 0 and self.c > 0):
            raise DomainError(f"{self.name}: hbar and c must be positive (got {self.hbar}, {self.c})")


NATURAL = UnitSystem("natural", hbar=1.0, c=1.0)

# erg*s and cm/s
CGS = UnitSystem("cgs", hbar=const.hbar * 1e7, c=const.c * 1e2)

SECONDS_PER_YEAR = const.year

UNIT_SYSTEMS = {u.name: u for u in (NATURAL, CGS)}


def get_units(name: str) -> UnitSystem:
    try:
        return UNIT_SYSTEMS[name]
    except KeyError:
        raise DomainError(f"Unknown unit system {name!r}; expected one of {sorted(UNIT_SYSTEMS)}") from None
