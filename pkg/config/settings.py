"""
Configuration settings for qkmech.
Defaults for every command-line run and every numerical tolerance live here.
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Logging
# QKMECH_LOG: DEBUG, INFO, WARNING or ERROR; empty means file logging only
LOG_LEVEL = os.getenv("QKMECH_LOG", "")

# ============================================================================
# BASE FILE PATHS
# ============================================================================
LOGS_DIR = Path(os.getenv("QKMECH_LOGS_DIR", "~/.qkmech/logs")).expanduser()
OUTPUT_DIR = Path(os.getenv("QKMECH_OUTPUT_DIR", "./qkmech-output")).expanduser()

# ============================================================================
# DERIVED FILE PATHS
# ============================================================================
LOG_FILE_NAME = "qkmech.log"
DEFAULT_TRAJECTORY_PATH = OUTPUT_DIR / "trajectory.csv"
SWEEP_SUMMARY_NAME = "sweep.json"

# ============================================================================
# RUN DEFAULTS
# Any of these can be overridden by a config file and then by flags
# ============================================================================
DEFAULT_N = 1
DEFAULT_STRUCTURE = "F"
DEFAULT_BUILTIN = "free_quadratic:1"
DEFAULT_SEED = 0

# Integrator
DEFAULT_METHOD = "rk4"
DEFAULT_DT = 1e-3
DEFAULT_T_END = 10.0
DEFAULT_ABS_TOL = 1e-10
DEFAULT_REL_TOL = 1e-8
DEFAULT_DT_MIN = 1e-10
DEFAULT_DT_MAX = 0.1
INTEGRATOR_METHODS = ["rk4", "rk45"]

# Batch sweeps
DEFAULT_SWEEP_WORKERS = 4

# ============================================================================
# NUMERICAL LIMITS
# ============================================================================
# Hessians with a condition estimate above this are treated as singular
SINGULAR_COND_LIMIT = 1e12

# Gravity built-in is undefined inside this ball around the origin
GRAVITY_EXCLUSION_RADIUS = 1e-9

# Lagrangian expressions: maximum nesting and tree depth
MAX_EXPR_DEPTH = 256

# The bracketed coordinate systems are assembled as an oracle up to this block size
LITERAL_ORACLE_MAX_N = 2

# Agreement required between the wedge-term and compact two-form assemblies
FORM_AGREEMENT_TOL = 1e-10

# Antisymmetry / symmetry tolerances for forms and metrics
ANTISYMMETRY_TOL = 1e-12
METRIC_SYMMETRY_TOL = 1e-12
METRIC_COMPATIBILITY_TOL = 1e-12

# Finite-difference oracle
DEFAULT_FD_STEP = 1e-4

# CSV output
CSV_SIGNIFICANT_DIGITS = 17

# ============================================================================
# VALIDATION SUITE
# Tolerance per check; `validate --tolerance` replaces all of them
# ============================================================================
DEFAULT_VALIDATE_POINTS = 100

VALIDATION_TOLERANCES = {
    "quaternion_relations": 0.0,
    "metric_compatibility": 1e-12,
    "wedge_vs_compact": 1e-10,
    "dynamics_identity": 1e-9,
    "ad_vs_fd_gradient": 1e-6,
    "ad_vs_fd_hessian": 1e-6,
    "literal_el_system": 1e-10,
    "energy_differential_paths": 1e-12,
}

# Energy drift above this is logged as a warning for quadratic built-ins
QUADRATIC_DRIFT_WARNING = 1e-8
