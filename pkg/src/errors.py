"""Exception types raised across the package.

Everything derives from ChronolapseError so the CLI can map library failures
to exit code 1 without catching unrelated bugs by accident.
"""

from dataclasses import dataclass


class ChronolapseError(Exception):
    """Base class for all errors raised by this package."""


class InvalidDensityError(ChronolapseError, ValueError):
    """An increment density is not normalizable, has a bad grid, or fails a strict check."""


class SamplerRangeError(ChronolapseError, OverflowError):
    """The expected tick count t/tau is beyond what the Poisson sampler supports."""


class DomainError(ChronolapseError, ValueError):
    """An argument lies outside the domain where the formula is defined."""


class DimensionMismatchError(ChronolapseError, ValueError):
    pass


class InvalidStateError(ChronolapseError, ValueError):
    """A matrix is not Hermitian, not unit-trace or not positive semidefinite."""


class StepSizeError(ChronolapseError, ValueError):
    pass


class PositivityError(ChronolapseError, ArithmeticError):
    """A trajectory lost positivity beyond the tolerated round-off."""


class StabilityError(ChronolapseError, ValueError):
    """An explicit PDE step violates the stability limit."""


class BoundaryMassError(ChronolapseError, RuntimeError):
    """Probability mass reached the edge of the finite grid."""


class LemmaPreconditionError(ChronolapseError, ValueError):
    pass


@dataclass(frozen=True)
class ConfigIssue:
    line: int | None
    message: str

    def __str__(self) -> str:
        where = f"line {self.line}" if self.line is not None else "config"
        return f"{where}: {self.message}"


class ConfigError(ChronolapseError, ValueError):
    """Raised with every problem found in a scenario file, not just the first."""

    def __init__(self, issues: list[ConfigIssue]):
        self.issues = list(issues)
        super().__init__("\n".join(str(i) for i in self.issues))
