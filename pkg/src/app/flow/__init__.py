"""Time integration of the semispray and trajectory output."""

from src.app.flow.integrator import (
    DriftReport,
    IntegratorConfig,
    Sample,
    Trajectory,
    analytic_oracle_quadratic,
    integrate,
    integrate_batch,
    step,
)
from src.app.flow.output import write_summary_json, write_trajectory_csv

__all__ = [
    "DriftReport",
    "IntegratorConfig",
    "Sample",
    "Trajectory",
    "analytic_oracle_quadratic",
    "integrate",
    "integrate_batch",
    "step",
    "write_summary_json",
    "write_trajectory_csv",
]
