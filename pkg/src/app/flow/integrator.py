"""
Time integration of Hess(L) ẋ = J ∇L.

The implicit system is solved pointwise at every Runge-Kutta stage. Two
schemes are available: classical fixed-step RK4 and the Dormand-Prince
5(4) embedded pair with step-size control.

Each accepted state is re-solved on-shell for its diagnostics (energy,
Hessian condition); the Euler-Lagrange residual is evaluated afterwards
on velocities differenced from the recorded states.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import (
    DEFAULT_ABS_TOL,
    DEFAULT_DT,
    DEFAULT_DT_MAX,
    DEFAULT_DT_MIN,
    DEFAULT_METHOD,
    DEFAULT_REL_TOL,
    DEFAULT_SWEEP_WORKERS,
    DEFAULT_T_END,
    INTEGRATOR_METHODS,
    QUADRATIC_DRIFT_WARNING,
)
from src.app.calculus.fields import Point, ScalarField, as_point
from src.app.geometry.structure import ChartDim, StructureKind, StructureOperator
from src.app.mechanics.dynamics import el_residual_from_jet, energy_from_jet, semispray_velocity
from src.core.errors import (
    ConfigError,
    DomainError,
    IntegrationError,
    SingularHessianError,
    StepSizeError,
    TimeStallError,
)
from src.core.logger import get_logger


_log = get_logger("flow")

_METHOD_ALIASES = {"rk45_adaptive": "rk45"}

# Classical RK4
_RK4_C = (0.0, 0.5, 0.5, 1.0)
_RK4_A = ((), (0.5,), (0.0, 0.5), (0.0, 0.0, 1.0))
_RK4_B = (1 / 6, 1 / 3, 1 / 3, 1 / 6)

# Dormand-Prince 5(4)
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


@dataclass(frozen=True)
class IntegratorConfig:
    """
    Integrator settings.

    ``dt`` is the fixed step for rk4 and the first trial step for rk45.
    The tolerances and step bounds only affect rk45.
    """

    method: str = DEFAULT_METHOD
    dt: float = DEFAULT_DT
    t_end: float = DEFAULT_T_END
    abs_tol: float = DEFAULT_ABS_TOL
    rel_tol: float = DEFAULT_REL_TOL
    dt_min: float = DEFAULT_DT_MIN
    dt_max: float = DEFAULT_DT_MAX

    def __post_init__(self):
        method = _METHOD_ALIASES.get(str(self.method), str(self.method))
        if method not in INTEGRATOR_METHODS:
            raise ConfigError(f"unknown integrator method '{self.method}' (choose from {', '.join(INTEGRATOR_METHODS)})")
        object.__setattr__(self, "method", method)
        for name in ("dt", "t_end", "abs_tol", "rel_tol", "dt_min", "dt_max"):
            value = float(getattr(self, name))
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be a positive finite number, got {value}")
            object.__setattr__(self, name, value)
        if self.dt_min > self.dt_max:
            raise ConfigError(f"dt_min ({self.dt_min}) must not exceed dt_max ({self.dt_max})")

    @property
    def adaptive(self) -> bool:
        return self.method == "rk45"

    def to_dict(self) -> Dict[str, Union[str, float]]:
        return {
            "method": self.method,
            "dt": self.dt,
            "t_end": self.t_end,
            "abs_tol": self.abs_tol,
            "rel_tol": self.rel_tol,
            "dt_min": self.dt_min,
            "dt_max": self.dt_max,
        }


@dataclass(frozen=True)
class Sample:
    t: float
    state: Point
    energy: float
    el_residual_norm: float
    hessian_cond: float


@dataclass
class Trajectory:
    """Samples ordered by strictly increasing time, the first at t=0."""

    samples: List[Sample]
    structure: StructureKind
    dim: ChartDim
    step_errors: List[float] = field(default_factory=list)
    step_tolerances: List[float] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    @property
    def states(self) -> np.ndarray:
        if not self.samples:
            return np.empty((0, self.dim.total))
        return np.array([s.state for s in self.samples])

    @property
    def energies(self) -> np.ndarray:
        return np.array([s.energy for s in self.samples])

    @property
    def final_state(self) -> Point:
        return self.samples[-1].state


@dataclass(frozen=True)
class DriftReport:
    max_energy_drift_rel: float
    max_residual: float
    worst_cond: float
    steps: int
    max_norm_drift_rel: float = 0.0
    final_time: float = 0.0

    @classmethod
    def from_trajectory(cls, trajectory: Trajectory) -> "DriftReport":
        if not trajectory.samples:
            nan = float("nan")
            return cls(nan, nan, nan, 0, nan, 0.0)
        return cls(
            max_energy_drift_rel=_relative_drift(trajectory.energies),
            max_residual=max(s.el_residual_norm for s in trajectory.samples),
            worst_cond=max(s.hessian_cond for s in trajectory.samples),
            steps=len(trajectory.samples) - 1,
            max_norm_drift_rel=_relative_drift(np.linalg.norm(trajectory.states, axis=1)),
            final_time=trajectory.samples[-1].t,
        )

    def to_dict(self) -> Dict[str, Union[int, float]]:
        return {
            "max_energy_drift_rel": self.max_energy_drift_rel,
            "max_residual": self.max_residual,
            "worst_cond": self.worst_cond,
            "steps": self.steps,
            "max_norm_drift_rel": self.max_norm_drift_rel,
            "final_time": self.final_time,
        }


def _relative_drift(series: np.ndarray) -> float:
    """max |s - s0| / |s0|, or the absolute drift when s0 is zero."""
    drift = float(np.max(np.abs(series - series[0])))
    return drift / abs(series[0]) if series[0] != 0.0 else drift


# ---------------------------------------------------------------------------
# Stages
# ---------------------------------------------------------------------------

VectorField = Callable[[Point], Point]


def _vector_field(L: ScalarField, J: StructureOperator) -> VectorField:
    def rhs(x: Point) -> Point:
        return semispray_velocity(L.jet(x), J)[0]
    return rhs


def _at_stage(exc: Exception, stage: int, t: float) -> Exception:
    where = f"RK stage {stage}, t={t:.17g}"
    if isinstance(exc, SingularHessianError):
        err = SingularHessianError(exc.condition, f"{exc.message} ({where})")
    elif isinstance(exc, DomainError):
        err = DomainError(f"{exc.message} ({where})", exc.span)
    else:
        return exc
    err.stage = stage
    err.t = t
    return err


def _stages(rhs: VectorField, state: Point, t: float, h: float, a, c, k1: Optional[Point] = None) -> List[Point]:
    ks: List[Point] = []
    for i, (ci, row) in enumerate(zip(c, a)):
        if i == 0 and k1 is not None:
            ks.append(k1)
            continue
        y = state + h * sum((aij * kj for aij, kj in zip(row, ks)), np.zeros_like(state))
        try:
            ks.append(rhs(y))
        except (SingularHessianError, DomainError) as exc:
            raise _at_stage(exc, i + 1, t + ci * h) from exc
    return ks


def _combine(state: Point, h: float, weights, ks: Sequence[Point]) -> Point:
    return state + h * sum((w * k for w, k in zip(weights, ks) if w != 0.0), np.zeros_like(state))


def step(L: ScalarField, J: StructureOperator, state, dt: float, t: float = 0.0) -> Point:
    """
    One classical RK4 step of ẋ = Hess(L)^-1 J ∇L.

    Args:
        L: Lagrangian.
        J: Structure operator.
        state: Current point.
        dt: Step length; 0 returns the state unchanged.
        t: Time of ``state``, only used to label stage errors.

    Raises:
        SingularHessianError, DomainError: From any stage, with ``stage``
            and ``t`` attributes naming where it happened.
    """
    x = as_point(state, L.dim)
    if dt == 0.0:
        return x.copy()
    ks = _stages(_vector_field(L, J), x, t, dt, _RK4_A, _RK4_C)
    return _combine(x, dt, _RK4_B, ks)


def dormand_prince_step(
    L: ScalarField, J: StructureOperator, state, dt: float, t: float = 0.0, k1: Optional[Point] = None
) -> Tuple[Point, Point]:
    """One Dormand-Prince step; returns the 5th and 4th order solutions."""
    return _dp_pair(_vector_field(L, J), as_point(state, L.dim), t, dt, k1)


def _dp_pair(rhs: VectorField, x: Point, t: float, h: float, k1: Optional[Point]) -> Tuple[Point, Point]:
    ks = _stages(rhs, x, t, h, _DP_A, _DP_C, k1)
    return _combine(x, h, _DP_B5, ks), _combine(x, h, _DP_B4, ks)


# ---------------------------------------------------------------------------
# Integration
# ---------------------------------------------------------------------------

class _Recorder:
    """Accepted states with their on-shell diagnostics."""

    def __init__(self, L: ScalarField, J: StructureOperator):
        self.L = L
        self.J = J
        self.times: List[float] = []
        self.states: List[Point] = []
        self.velocities: List[Point] = []
        self.energies: List[float] = []
        self.conds: List[float] = []
        self.step_errors: List[float] = []
        self.step_tolerances: List[float] = []

    def accept(self, t: float, x: Point) -> Point:
        """Record x at t and return its on-shell velocity."""
        try:
            jet = self.L.jet(x)
            xi, cond = semispray_velocity(jet, self.J)
        except (SingularHessianError, DomainError) as exc:
            raise _at_stage(exc, 1, t) from exc
        self.times.append(t)
        self.states.append(x)
        self.velocities.append(xi)
        self.energies.append(energy_from_jet(jet, xi, self.J))
        self.conds.append(cond)
        return xi

    @property
    def t(self) -> float:
        return self.times[-1] if self.times else 0.0

    def trajectory(self) -> Trajectory:
        if not self.states:
            return Trajectory([], self.J.kind, self.L.dim)
        states = np.array(self.states)
        times = np.array(self.times)
        if len(states) >= 2:
            velocities = np.gradient(states, times, axis=0, edge_order=2 if len(states) >= 3 else 1)
        else:
            velocities = np.array(self.velocities)
        samples = []
        for t, x, v, e, cond in zip(self.times, self.states, velocities, self.energies, self.conds):
            residual = el_residual_from_jet(self.L.jet(x), v, self.J)
            samples.append(Sample(t, x, e, residual.norm, cond))
        return Trajectory(samples, self.J.kind, self.L.dim, list(self.step_errors), list(self.step_tolerances))


def _run_fixed(rec: _Recorder, rhs: VectorField, x: Point, cfg: IntegratorConfig) -> None:
    k1 = rec.accept(0.0, x)
    n_steps = math.ceil(cfg.t_end / cfg.dt - 1e-9)
    for k in range(1, n_steps + 1):
        t_prev = rec.t
        t_next = min(k * cfg.dt, cfg.t_end)
        h = t_next - t_prev
        ks = _stages(rhs, x, t_prev, h, _RK4_A, _RK4_C, k1)
        x = _combine(x, h, _RK4_B, ks)
        k1 = rec.accept(t_next, x)


def _advance(t: float, h: float) -> float:
    t_next = t + h
    if t_next <= t:
        raise TimeStallError(t, h)
    return t_next


def _run_adaptive(rec: _Recorder, rhs: VectorField, x: Point, cfg: IntegratorConfig) -> None:
    k1 = rec.accept(0.0, x)
    t = 0.0
    h = min(max(cfg.dt, cfg.dt_min), cfg.dt_max)
    while t < cfg.t_end:
        last = cfg.t_end - t <= h * (1.0 + 1e-9)
        h_try = cfg.t_end - t if last else h
        t_next = cfg.t_end if last else _advance(t, h_try)
        y5, y4 = _dp_pair(rhs, x, t, h_try, k1)
        err = float(np.max(np.abs(y5 - y4)))
        tol = cfg.abs_tol + cfg.rel_tol * max(float(np.max(np.abs(x))), float(np.max(np.abs(y5))))

        if err <= tol:
            t = t_next
            x = y5
            rec.step_errors.append(err)
            rec.step_tolerances.append(tol)
            k1 = rec.accept(t, x)
        else:
            _log.debug("rejected step h=%.3e at t=%.6g (err %.3e > tol %.3e)", h_try, t, err, tol)
            if h_try <= cfg.dt_min:
                raise StepSizeError(h_try, err, tol)

        factor = _MAX_FACTOR if err == 0.0 else min(_MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * (tol / err) ** 0.2))
        h = min(max(h_try * factor, cfg.dt_min), cfg.dt_max)


def integrate(L: ScalarField, J: StructureOperator, x0, cfg: IntegratorConfig) -> Tuple[Trajectory, DriftReport]:
    """
    Integrate from x0 over [0, cfg.t_end].

    Returns:
        The trajectory and its DriftReport.

    Raises:
        IntegrationError: If a step fails; it carries the partial
            trajectory and report computed up to the failure.
    """
    x = as_point(x0, L.dim)
    rec = _Recorder(L, J)
    rhs = _vector_field(L, J)
    _log.info("integrating %s with %s for %s, dt=%g, t_end=%g", L.name, cfg.method, J.kind, cfg.dt, cfg.t_end)
    try:
        if cfg.adaptive:
            _run_adaptive(rec, rhs, x, cfg)
        else:
            _run_fixed(rec, rhs, x, cfg)
    except (SingularHessianError, DomainError, StepSizeError, TimeStallError) as exc:
        t_fail = getattr(exc, "t", rec.t)
        trajectory = rec.trajectory()
        report = DriftReport.from_trajectory(trajectory)
        _log.error("integration stopped at t=%.6g after %d samples: %s", t_fail, len(trajectory), exc)
        raise IntegrationError(exc, t_fail, trajectory, report) from exc

    trajectory = rec.trajectory()
    report = DriftReport.from_trajectory(trajectory)
    _log.info(
        "finished %d steps: energy drift %.3e, max residual %.3e, worst cond %.3e",
        report.steps, report.max_energy_drift_rel, report.max_residual, report.worst_cond,
    )
    if report.max_energy_drift_rel > QUADRATIC_DRIFT_WARNING:
        _log.warning(
            "relative energy drift %.3e exceeds %.0e; conservation is only guaranteed for quadratic Lagrangians",
            report.max_energy_drift_rel, QUADRATIC_DRIFT_WARNING,
        )
    return trajectory, report


BatchResult = Union[Tuple[Trajectory, DriftReport], IntegrationError]


def integrate_batch(
    L: ScalarField,
    J: StructureOperator,
    x0s: Sequence,
    cfg: IntegratorConfig,
    max_workers: int = DEFAULT_SWEEP_WORKERS,
) -> List[BatchResult]:
    """
    Integrate independent initial conditions concurrently.

    Results come back in the order of ``x0s``; a failed run appears as its
    IntegrationError instead of a (trajectory, report) pair.
    """
    def run(x0) -> BatchResult:
        try:
            return integrate(L, J, x0, cfg)
        except IntegrationError as exc:
            return exc

    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as pool:
        return list(pool.map(run, x0s))


def analytic_oracle_quadratic(m: float, J: StructureOperator, x0, t: float) -> Point:
    """
    exp(tJ) x0 = cos(t) x0 + sin(t) J x0, the flow of free_quadratic(m).

    With Hess = m I and ∇L = m x the mass cancels, so ``m`` only has to be
    non-zero.
    """
    if m == 0:
        raise ValueError("mass must be non-zero")
    x = np.asarray(x0, dtype=float)
    return math.cos(t) * x + math.sin(t) * J.apply(x)
