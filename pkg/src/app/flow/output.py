"""
Trajectory CSV and JSON summary writers.
"""

import csv
import json
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from config.settings import CSV_SIGNIFICANT_DIGITS
from src.app.flow.integrator import DriftReport, Trajectory
from src.app.geometry.structure import ChartDim
from src.core.logger import get_logger


_log = get_logger("output")

# Every cell carries exactly CSV_SIGNIFICANT_DIGITS significant digits.
_FLOAT_FORMAT = f".{CSV_SIGNIFICANT_DIGITS - 1}e"


def csv_header(dim: ChartDim) -> List[str]:
    """t, x0..x{4n-1}, energy, el_residual, hess_cond."""
    return ["t"] + [f"x{a}" for a in range(dim.total)] + ["energy", "el_residual", "hess_cond"]


def _fmt(value: float) -> str:
    return format(float(value), _FLOAT_FORMAT)


def write_trajectory_csv(path: Union[str, Path], trajectory: Trajectory, dim: ChartDim) -> Path:
    """
    Write one row per sample.

    A partial trajectory (from a failed run) is written the same way; an
    empty one leaves just the header.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(csv_header(dim))
        for s in trajectory.samples:
            writer.writerow(
                [_fmt(s.t)] + [_fmt(v) for v in s.state] + [_fmt(s.energy), _fmt(s.el_residual_norm), _fmt(s.hessian_cond)]
            )
    _log.info("wrote %d samples to %s", len(trajectory), path)
    return path


def sanitize(value: Any) -> Any:
    """Recursively replace inf/nan with None so the output stays valid JSON."""
    if isinstance(value, dict):
        return {k: sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [sanitize(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def summary_payload(
    report: Optional[DriftReport],
    config: Dict[str, Any],
    status: str = "completed",
    error: Optional[str] = None,
) -> Dict[str, Any]:
    payload: Dict[str, Any] = {"status": status}
    if error is not None:
        payload["error"] = error
    payload["report"] = report.to_dict() if report is not None else None
    payload["config"] = config
    return sanitize(payload)


def write_json(path: Union[str, Path], payload: Dict[str, Any]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(sanitize(payload), f, indent=2, allow_nan=False)
    return path


def write_summary_json(
    path: Union[str, Path],
    report: Optional[DriftReport],
    config: Dict[str, Any],
    status: str = "completed",
    error: Optional[str] = None,
) -> Path:
    """
    DriftReport fields plus the effective-config echo.

    ``status`` is "completed" or "failed"; a failed run also records the
    error message.
    """
    path = write_json(path, summary_payload(report, config, status, error))
    _log.info("wrote summary (%s) to %s", status, path)
    return path
