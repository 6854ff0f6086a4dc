from src.oracle.monte_carlo import (
    ComparisonReport,
    DecayKernel,
    OracleResult,
    PhaseKernel,
    average_density_matrix,
    average_scalar,
    compare,
    deviation_slope,
)

__all__ = [
    "OracleResult",
    "ComparisonReport",
    "PhaseKernel",
    "DecayKernel",
    "average_density_matrix",
    "average_scalar",
    "compare",
    "deviation_slope",
]
