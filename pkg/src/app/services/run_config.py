"""
Run configuration for the command line.

Values come from three layers: the defaults in config.settings, an optional
``key = value`` config file, and command-line flags. Later layers win.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
from dotenv import dotenv_values

from config.settings import (
    DEFAULT_BUILTIN,
    DEFAULT_N,
    DEFAULT_SEED,
    DEFAULT_STRUCTURE,
    DEFAULT_TRAJECTORY_PATH,
    DEFAULT_VALIDATE_POINTS,
    OUTPUT_DIR,
)
from src.app.calculus import get_builtin
from src.app.calculus.fields import ScalarField
from src.app.dsl import eval_as_field, parse
from src.app.flow.integrator import IntegratorConfig
from src.app.geometry.structure import ChartDim, StructureKind, StructureOperator, build_structure
from src.core.errors import ConfigError, DimensionError
from src.core.logger import get_logger


_log = get_logger("config")

# Config-file key -> RunConfig field
FILE_KEYS = {
    "n": "n",
    "structure": "structure",
    "builtin": "builtin",
    "lagrangian.expr": "lagrangian_expr",
    "x0": "x0",
    "dt": "dt",
    "t_end": "t_end",
    "method": "method",
    "abs_tol": "abs_tol",
    "rel_tol": "rel_tol",
    "dt_min": "dt_min",
    "dt_max": "dt_max",
    "out": "out",
    "seed": "seed",
    "points": "points",
    "tolerance": "tolerance",
}

_INTEGRATOR_FIELDS = ("method", "dt", "t_end", "abs_tol", "rel_tol", "dt_min", "dt_max")


@dataclass
class RunConfig:
    """Effective settings for one command invocation."""

    n: int = DEFAULT_N
    structure: StructureKind = StructureKind.parse(DEFAULT_STRUCTURE)
    builtin: Optional[str] = DEFAULT_BUILTIN
    lagrangian_expr: Optional[str] = None
    x0: Optional[np.ndarray] = None
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    out: Optional[Path] = None
    seed: int = DEFAULT_SEED
    points: int = DEFAULT_VALIDATE_POINTS
    tolerance: Optional[float] = None
    config_file: Optional[Path] = None

    @property
    def dim(self) -> ChartDim:
        return ChartDim(self.n)

    def operator(self) -> StructureOperator:
        return build_structure(self.structure, self.dim)

    def initial_state(self) -> np.ndarray:
        """x0, defaulting to the first basis vector."""
        if self.x0 is not None:
            return self.x0
        x0 = np.zeros(self.dim.total)
        x0[0] = 1.0
        return x0

    def lagrangian(self) -> ScalarField:
        """
        Build the Lagrangian field.

        Raises:
            ConfigError: Unknown built-in or invalid parameters.
            ParseError: The expression does not parse.
        """
        if self.lagrangian_expr is not None:
            return eval_as_field(parse(self.lagrangian_expr, self.dim), self.dim, self.lagrangian_expr)
        try:
            return get_builtin(self.builtin, self.dim)
        except KeyError as e:
            raise ConfigError(e.args[0]) from None
        except ValueError as e:
            raise ConfigError(str(e)) from None

    def trajectory_path(self) -> Path:
        return self.out if self.out is not None else DEFAULT_TRAJECTORY_PATH

    def sweep_dir(self) -> Path:
        return self.out if self.out is not None else OUTPUT_DIR

    def to_dict(self) -> Dict[str, Any]:
        """Effective-config echo for JSON outputs."""
        if self.lagrangian_expr is not None:
            lagrangian = {"expr": self.lagrangian_expr}
        else:
            lagrangian = {"builtin": self.builtin}
        return {
            "n": self.n,
            "structure": str(self.structure),
            "lagrangian": lagrangian,
            "x0": [float(v) for v in self.initial_state()],
            "integrator": self.integrator.to_dict(),
            "out": str(self.out) if self.out is not None else None,
            "seed": self.seed,
            "points": self.points,
            "tolerance": self.tolerance,
            "config_file": str(self.config_file) if self.config_file is not None else None,
        }


def parse_vector(text: str, what: str = "vector") -> np.ndarray:
    """
    Parse "v,v,..." into a float array.

    Raises:
        ConfigError: If an entry is not a finite number.
    """
    items = [item.strip() for item in str(text).split(",")]
    try:
        values = np.array([float(item) for item in items], dtype=float)
    except ValueError:
        raise ConfigError(f"{what} must be comma-separated numbers, got {text!r}") from None
    if not np.all(np.isfinite(values)):
        raise ConfigError(f"{what} has non-finite entries: {text!r}")
    return values


def _check_line_syntax(path: Path) -> None:
    """Reject lines without a single key before "=", which dotenv would skip."""
    for number, line in enumerate(path.read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("export "):
            stripped = stripped[len("export "):].lstrip()
        key, sep, _ = stripped.partition("=")
        if not sep or not key.strip() or len(key.split()) != 1:
            raise ConfigError(f"malformed line {number} in {path}: {line.strip()!r} (expected key = value)")


def load_config_file(path) -> Dict[str, str]:
    """
    Read a ``key = value`` file (``#`` comments allowed).

    Returns:
        Raw string values keyed by RunConfig field name.

    Raises:
        ConfigError: Missing file, malformed line, unknown key, or key
            without a value.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    _check_line_syntax(path)
    raw = dotenv_values(path, interpolate=False)
    values = {}
    for key, value in raw.items():
        if key not in FILE_KEYS:
            raise ConfigError(f"unknown config key '{key}' in {path} (known: {', '.join(FILE_KEYS)})")
        if value is None or value == "":
            raise ConfigError(f"config key '{key}' in {path} has no value")
        values[FILE_KEYS[key]] = value
    _log.debug("loaded %d keys from %s", len(values), path)
    return values


def _lagrangian_source(layer: Dict[str, Any], where: str) -> Optional[Dict[str, Any]]:
    builtin = layer.get("builtin")
    expr = layer.get("lagrangian_expr")
    if builtin is not None and expr is not None:
        raise ConfigError(f"give either a built-in or a Lagrangian expression, not both ({where})")
    if builtin is not None:
        return {"builtin": builtin, "lagrangian_expr": None}
    if expr is not None:
        return {"builtin": None, "lagrangian_expr": expr}
    return None


def _convert(value: Any, convert, what: str):
    try:
        return convert(value)
    except (TypeError, ValueError):
        raise ConfigError(f"invalid value for {what}: {value!r}") from None


def build_run_config(config_path=None, **flags) -> RunConfig:
    """
    Merge defaults, the config file at ``config_path`` and flags.

    Flags set to None count as not given. A Lagrangian source given on
    the command line replaces the one from the file.

    Raises:
        ConfigError: Invalid values or both Lagrangian sources at one layer.
        DimensionError: x0 length does not match 4n.
    """
    unknown = set(flags) - set(FILE_KEYS.values())
    if unknown:
        raise ConfigError(f"unknown settings: {', '.join(sorted(unknown))}")

    file_values = load_config_file(config_path) if config_path is not None else {}
    flag_values = {k: v for k, v in flags.items() if v is not None}

    source = (
        _lagrangian_source(flag_values, "command line")
        or _lagrangian_source(file_values, "config file")
        or {"builtin": DEFAULT_BUILTIN, "lagrangian_expr": None}
    )
    merged: Dict[str, Any] = {**file_values, **flag_values, **source}

    cfg = RunConfig(config_file=Path(config_path) if config_path is not None else None)
    if "n" in merged:
        cfg.n = _convert(merged["n"], int, "n")
        if cfg.n < 1:
            raise ConfigError(f"n must be at least 1, got {cfg.n}")
    if "structure" in merged:
        value = merged["structure"]
        cfg.structure = value if isinstance(value, StructureKind) else _convert(
            value, StructureKind.parse, "structure"
        )
    cfg.builtin = merged["builtin"]
    cfg.lagrangian_expr = merged["lagrangian_expr"]

    if "x0" in merged:
        value = merged["x0"]
        x0 = parse_vector(value, "x0") if isinstance(value, str) else np.asarray(value, dtype=float)
        if x0.shape != (cfg.dim.total,):
            raise DimensionError(f"x0 has {x0.size} entries but 4n={cfg.dim.total}")
        cfg.x0 = x0

    integrator_args = {}
    for name in _INTEGRATOR_FIELDS:
        if name in merged:
            integrator_args[name] = merged[name] if name == "method" else _convert(merged[name], float, name)
    cfg.integrator = IntegratorConfig(**integrator_args)

    if "out" in merged:
        cfg.out = Path(merged["out"]).expanduser()
    if "seed" in merged:
        cfg.seed = _convert(merged["seed"], int, "seed")
    if "points" in merged:
        cfg.points = _convert(merged["points"], int, "points")
        if cfg.points < 1:
            raise ConfigError(f"points must be at least 1, got {cfg.points}")
    if "tolerance" in merged:
        cfg.tolerance = _convert(merged["tolerance"], float, "tolerance")
        if not cfg.tolerance >= 0:
            raise ConfigError(f"tolerance must be non-negative, got {cfg.tolerance}")
    return cfg
