"""
Identity suite behind `validate`.

Every check records the largest violation seen over the sampled points and
compares it with its tolerance. Points where the Lagrangian is not smooth,
or its Hessian is singular, are counted as skipped for the checks that need
them.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from config.settings import (
    DEFAULT_FD_STEP,
    LITERAL_ORACLE_MAX_N,
    VALIDATION_TOLERANCES,
)
from src.app.calculus.fields import ScalarField, fd_oracle
from src.app.geometry.forms import metric_compatibility, wedge_discrepancies
from src.app.geometry.structure import ChartDim, build_all, verify_relations
from src.app.mechanics.dynamics import (
    compare_literal_el_system,
    energy_differential_from_jet,
    energy_differential_literal,
    energy_from_jet,
    energy_literal,
    identity_violation,
    semispray_velocity,
)
from src.core.errors import DomainError, SingularHessianError
from src.core.logger import get_logger


_log = get_logger("validation")

# Sample points closer to the origin than this are redrawn; the gravity
# built-in and sqrt/abs expressions lose smoothness there.
MIN_POINT_NORM = 0.5


@dataclass
class CheckResult:
    name: str
    max_violation: float
    tolerance: float
    samples: int = 0
    skipped: int = 0

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tolerance

    def record(self, violation: float) -> None:
        self.samples += 1
        self.max_violation = max(self.max_violation, float(violation))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "max_violation": self.max_violation,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "samples": self.samples,
            "skipped": self.skipped,
        }


@dataclass
class ValidationReport:
    n: int
    lagrangian: str
    seed: int
    points: int
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def first_failure(self) -> Optional[CheckResult]:
        return next((c for c in self.checks if not c.passed), None)

    def check(self, name: str) -> CheckResult:
        return next(c for c in self.checks if c.name == name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "lagrangian": self.lagrangian,
            "seed": self.seed,
            "points": self.points,
            "all_passed": self.all_passed,
            "first_failure": self.first_failure.name if self.first_failure is not None else None,
            "checks": [c.to_dict() for c in self.checks],
        }


def sample_points(rng: np.random.Generator, dim: ChartDim, count: int) -> List[np.ndarray]:
    """Uniform points in [-1, 1]^{4n}, redrawn when closer than MIN_POINT_NORM to the origin."""
    points = []
    while len(points) < count:
        p = rng.uniform(-1.0, 1.0, dim.total)
        if np.linalg.norm(p) >= MIN_POINT_NORM:
            points.append(p)
    return points


def _relative(diff: np.ndarray, reference: np.ndarray) -> float:
    return float(np.max(np.abs(diff))) / (1.0 + float(np.max(np.abs(reference))))


def run_validation(
    L: ScalarField,
    points: int,
    seed: int,
    tolerance: Optional[float] = None,
    fd_step: float = DEFAULT_FD_STEP,
) -> ValidationReport:
    """
    Run every identity check on ``points`` seeded random points.

    Args:
        L: Lagrangian under test.
        points: Number of sample points.
        seed: Seed for numpy's default generator; the report is a pure
            function of (L, points, seed, tolerance).
        tolerance: If given, replaces every per-check tolerance.
        fd_step: Finite-difference step for the AD comparison.

    Returns:
        ValidationReport with one CheckResult per identity.
    """
    dim = L.dim
    tol = {name: (tolerance if tolerance is not None else value) for name, value in VALIDATION_TOLERANCES.items()}
    checks = {name: CheckResult(name, 0.0, tol[name]) for name in VALIDATION_TOLERANCES}
    operators = build_all(dim)

    relations = verify_relations(dim)
    checks["quaternion_relations"].record(relations.max_violation)
    identity_metric = np.eye(dim.total)
    for J in operators.values():
        checks["metric_compatibility"].record(metric_compatibility(identity_metric, J).violation)

    rng = np.random.default_rng(seed)
    for p in sample_points(rng, dim, points):
        try:
            jet = L.jet(p)
        except DomainError:
            for name in ("wedge_vs_compact", "dynamics_identity", "ad_vs_fd_gradient", "ad_vs_fd_hessian",
                         "literal_el_system", "energy_differential_paths"):
                checks[name].skipped += 1
            continue

        try:
            fd = fd_oracle(L, p, fd_step)
            checks["ad_vs_fd_gradient"].record(_relative(jet.gradient - fd.gradient, jet.gradient))
            checks["ad_vs_fd_hessian"].record(_relative(jet.hessian - fd.hessian, jet.hessian))
        except DomainError:
            checks["ad_vs_fd_gradient"].skipped += 1
            checks["ad_vs_fd_hessian"].skipped += 1

        for J in operators.values():
            checks["wedge_vs_compact"].record(wedge_discrepancies(jet.hessian, J)[0])
            if dim.n <= LITERAL_ORACLE_MAX_N:
                checks["literal_el_system"].record(compare_literal_el_system(jet, J))

            try:
                violation, condition = identity_violation(jet, p, J)
                xi, _ = semispray_velocity(jet, J)
            except SingularHessianError:
                checks["dynamics_identity"].skipped += 1
                checks["energy_differential_paths"].skipped += 1
                continue
            checks["dynamics_identity"].record(violation / (1.0 + condition))

            compact_dE = energy_differential_from_jet(jet, xi, J)
            literal_dE = energy_differential_literal(jet, xi, J.kind, dim)
            compact_E = energy_from_jet(jet, xi, J)
            literal_E = energy_literal(jet, xi, J.kind, dim)
            checks["energy_differential_paths"].record(max(
                _relative(compact_dE - literal_dE, compact_dE),
                abs(compact_E - literal_E) / (1.0 + abs(compact_E)),
            ))

    report = ValidationReport(dim.n, L.name, seed, points, list(checks.values()))
    for c in report.checks:
        if c.skipped:
            _log.warning("%s skipped %d point(s)", c.name, c.skipped)
    if report.first_failure is not None:
        _log.warning("validation failed: %s (%.3e > %.3e)",
                     report.first_failure.name, report.first_failure.max_violation, report.first_failure.tolerance)
    return report
