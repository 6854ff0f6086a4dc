import os
from pathlib import Path

# Environment overrides
N_JOBS = int(os.getenv("CHRONOLAPSE_N_JOBS", "1"))
OUT_DIR = Path(os.getenv("CHRONOLAPSE_OUT_DIR", "reports"))
LOG_LEVEL = os.getenv("CHRONOLAPSE_LOG_LEVEL", "INFO")

SCENARIO_DIR = Path("scenarios")

# Samples are drawn in blocks of this size; each block has its own counter-derived
# stream, so changing it changes every sample set. Never make it configurable.
SAMPLE_BLOCK_SIZE = 1 << 16

MAX_DIM = 64
MAX_TICKS = 1e12
MIN_ORACLE_SAMPLES = 1_000

# Tolerances
NORMALIZATION_TOL = 1e-9
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
ENTROPY_EIG_FLOOR = 1e-15
ENTROPY_RATE_EIG_FLOOR = 1e-12
POSITIVITY_ABORT = -1e-6
Z_SCORE_LIMIT = 5.0
STDERR_FLOOR = 1e-15
PDE_MASS_TOL = 1e-6
PDE_BOUNDARY_MASS = 1e-8
PDE_CFL = 0.4
TABULATED_MIN_POINTS = 16
# Upper bound on increments drawn at once when summing tabulated increments
TABULATED_DRAW_BUDGET = 1 << 20

# Artifacts
CSV_FLOAT_FORMAT = "%.17e"
