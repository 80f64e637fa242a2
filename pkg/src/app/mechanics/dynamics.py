"""
Dynamics on the quaternionic Kaehler chart.

The velocities X^a of a semispray are fiber coordinates independent of x:
the energy is differentiated in x with ξ held fixed, and d/dt(dL/dx_a)
along an integral curve expands to (Hess · ẋ)_a.

Compact matrix forms are the production path. The coordinate term tables
give the literal sums, used here as oracles.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from config.settings import FORM_AGREEMENT_TOL, LITERAL_ORACLE_MAX_N
from src.app.calculus.fields import Jet2, Point, ScalarField, as_point
from src.app.geometry.forms import OneForm, TwoForm, kahler_two_form_from_jet
from src.app.geometry.structure import (
    ChartDim,
    SignedPermutation,
    StructureKind,
    StructureOperator,
    as_vector,
    build_structure,
)
from src.app.geometry.term_tables import BRACKET_TERMS, ENERGY_TERMS, EULER_LAGRANGE_TERMS
from src.app.mechanics.linsolve import solve_pivoted
from src.core.errors import DimensionError, InconsistencyError
from src.core.logger import get_logger


_log = get_logger("mechanics")


@dataclass(frozen=True)
class Semispray:
    """Velocity ξ solved at a point for one structure."""

    velocity: np.ndarray
    at: Point
    structure: StructureKind
    condition: float = float("nan")
    literal_deviation: Optional[float] = None

    def __post_init__(self):
        v = np.array(self.velocity, dtype=float)
        if v.shape != np.shape(self.at):
            raise DimensionError(f"velocity shape {v.shape} does not match point shape {np.shape(self.at)}")
        if not np.all(np.isfinite(v)):
            raise ValueError("semispray velocity is not finite")
        object.__setattr__(self, "velocity", v)
        object.__setattr__(self, "at", np.array(self.at, dtype=float))

    @property
    def dim(self) -> ChartDim:
        return ChartDim(self.velocity.shape[0] // 4)


@dataclass(frozen=True)
class EnergyValue:
    value: float
    structure: StructureKind


@dataclass(frozen=True)
class ELResidual:
    """Euler-Lagrange residual, one entry per equation, grouped in four blocks."""

    components: np.ndarray
    structure: StructureKind
    norm: float = field(init=False)

    def __post_init__(self):
        comps = np.array(self.components, dtype=float)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "norm", float(np.max(np.abs(comps))) if comps.size else 0.0)

    def blocks(self) -> List[np.ndarray]:
        n = self.components.shape[0] // 4
        return [self.components[b * n:(b + 1) * n] for b in range(4)]


def _operator_for(xi: Semispray) -> StructureOperator:
    return build_structure(xi.structure, xi.dim)


def _velocity(xi) -> np.ndarray:
    return xi.velocity if isinstance(xi, Semispray) else np.asarray(xi, dtype=float)


# ---------------------------------------------------------------------------
# Liouville field, energy, energy differential, interior product
# ---------------------------------------------------------------------------

def liouville_field(J: SignedPermutation, xi) -> np.ndarray:
    """V_J = J ξ."""
    return J.apply(_velocity(xi))


def energy_from_jet(jet: Jet2, velocity: np.ndarray, J: SignedPermutation) -> float:
    """∇L · (J ξ) - L."""
    return float(jet.gradient @ J.apply(velocity) - jet.value)


def energy(L: ScalarField, xi: Semispray, jet: Optional[Jet2] = None) -> EnergyValue:
    """
    E_L^J = V_J(L) - L at the semispray's base point.

    Raises:
        DomainError: If L is not smooth there.
    """
    jet = jet if jet is not None else L.jet(xi.at)
    return EnergyValue(energy_from_jet(jet, xi.velocity, _operator_for(xi)), xi.structure)


def energy_differential_from_jet(jet: Jet2, velocity: np.ndarray, J: SignedPermutation) -> np.ndarray:
    """Hess · (J ξ) - ∇L."""
    return jet.hessian @ J.apply(velocity) - jet.gradient


def energy_differential(L: ScalarField, xi: Semispray, jet: Optional[Jet2] = None) -> OneForm:
    """dE_L^J in the base coordinates, with ξ held fixed."""
    jet = jet if jet is not None else L.jet(xi.at)
    return OneForm(energy_differential_from_jet(jet, xi.velocity, _operator_for(xi)))


def interior_product(phi: TwoForm, xi) -> OneForm:
    """The covector Y -> Φ(ξ, Y), i.e. matrix^T ξ."""
    v = _velocity(xi)
    if v.shape != (phi.matrix.shape[0],):
        raise DimensionError(f"vector of shape {v.shape} does not match a {phi.matrix.shape[0]}-dim form")
    return OneForm(phi.matrix.T @ v)


# ---------------------------------------------------------------------------
# Literal coordinate sums
# ---------------------------------------------------------------------------

def energy_literal(jet: Jet2, velocity: np.ndarray, kind: StructureKind, dim: ChartDim) -> float:
    """The energy as the displayed coordinate sum over X^a dL/dx_b terms."""
    n = dim.n
    total = 0.0
    for block, partial, sign in ENERGY_TERMS[kind]:
        for i in range(n):
            total += sign * velocity[block * n + i] * jet.gradient[partial * n + i]
    return total - jet.value


def energy_differential_literal(jet: Jet2, velocity: np.ndarray, kind: StructureKind, dim: ChartDim) -> np.ndarray:
    """Row sums of the displayed energy differential."""
    n = dim.n
    rows = -np.array(jet.gradient, dtype=float)
    for r in range(dim.total):
        for block, partial, sign in ENERGY_TERMS[kind]:
            for i in range(n):
                rows[r] += sign * velocity[block * n + i] * jet.hessian[r, partial * n + i]
    return rows


def literal_el_system(jet: Jet2, kind: StructureKind, dim: ChartDim) -> Tuple[np.ndarray, np.ndarray]:
    """
    The bracketed linear system in displayed row order.

    Row (c, j) reads  sign * sum_{b,i} X^{b*n+i} Hess[b*n+i, hess*n+j] + dL/dx_{c*n+j} = 0,
    returned as coefficients A and right-hand side b with A ξ = b.
    """
    n = dim.n
    coeffs = np.zeros((dim.total, dim.total))
    rhs = np.zeros(dim.total)
    for c, hess_block, sign in BRACKET_TERMS[kind]:
        for j in range(n):
            row = c * n + j
            coeffs[row, :] = sign * jet.hessian[:, hess_block * n + j]
            rhs[row] = -jet.gradient[c * n + j]
    return coeffs, rhs


def compare_literal_el_system(jet: Jet2, J: StructureOperator) -> float:
    """
    Max coefficient deviation between the bracketed system and Hess ξ = J ∇L.

    Literal row (c, j) with sign s corresponds to compact row hess*n + j
    after division by s.
    """
    dim = J.dim
    n = dim.n
    coeffs, rhs = literal_el_system(jet, J.kind, dim)
    target = J.apply(jet.gradient)
    deviation = 0.0
    for c, hess_block, sign in BRACKET_TERMS[J.kind]:
        for j in range(n):
            row = c * n + j
            compact_row = hess_block * n + j
            deviation = max(
                deviation,
                float(np.max(np.abs(coeffs[row, :] / sign - jet.hessian[compact_row, :]))),
                abs(rhs[row] / sign - target[compact_row]),
            )
    return deviation


def el_residual_from_jet(jet: Jet2, v: np.ndarray, J: StructureOperator) -> ELResidual:
    """Hess · v + (displayed gradient terms), equation by equation."""
    n = J.dim.n
    comps = jet.hessian @ v
    for block, partial, sign in EULER_LAGRANGE_TERMS[J.kind]:
        for i in range(n):
            comps[block * n + i] += sign * jet.gradient[partial * n + i]
    return ELResidual(comps, J.kind)


# ---------------------------------------------------------------------------
# Semispray solve and checks
# ---------------------------------------------------------------------------

def semispray_velocity(jet: Jet2, J: SignedPermutation) -> Tuple[np.ndarray, float]:
    """Solve Hess ξ = J ∇L; returns (ξ, condition estimate)."""
    result = solve_pivoted(jet.hessian, J.apply(jet.gradient))
    return result.solution, result.condition


def solve_semispray_from_jet(jet: Jet2, p: Point, J: StructureOperator) -> Semispray:
    velocity, condition = semispray_velocity(jet, J)
    deviation = None
    if J.dim.n <= LITERAL_ORACLE_MAX_N:
        deviation = compare_literal_el_system(jet, J)
        if deviation > FORM_AGREEMENT_TOL:
            raise InconsistencyError(f"bracketed system disagrees with Hess ξ = J∇L for {J.kind}", deviation)
    return Semispray(velocity, p, J.kind, condition, deviation)


def solve_semispray(L: ScalarField, p, J: StructureOperator) -> Semispray:
    """
    Solve the dynamics equation i_ξΦ = dE at p, i.e. Hess(L) ξ = J ∇L.

    For n up to LITERAL_ORACLE_MAX_N the bracketed coordinate system is
    assembled too and must agree with the compact one.

    Raises:
        SingularHessianError: If Hess(L)(p) is not invertible (carries the
            condition estimate).
        DomainError: If L is not smooth at p.
    """
    coords = as_point(p, L.dim)
    return solve_semispray_from_jet(L.jet(coords), coords, J)


def el_residual(L: ScalarField, p, v, J: StructureOperator) -> ELResidual:
    """
    Residual of the Euler-Lagrange system for velocity v at p:
    Hess · v - J ∇L, block signs as displayed.
    """
    coords = as_point(p, L.dim)
    return el_residual_from_jet(L.jet(coords), as_vector(v, L.dim, "velocity"), J)


def identity_violation(jet: Jet2, p: Point, J: StructureOperator) -> Tuple[float, float]:
    """(|i_ξΦ - dE|_inf, condition) with ξ solved on-shell at the jet."""
    velocity, condition = semispray_velocity(jet, J)
    phi = kahler_two_form_from_jet(jet, J)
    lhs = interior_product(phi, velocity).components
    rhs = energy_differential_from_jet(jet, velocity, J)
    return float(np.max(np.abs(lhs - rhs))), condition


def dynamics_identity_check(L: ScalarField, p, J: StructureOperator) -> float:
    """
    Solve the semispray and return |i_ξΦ_L^J - dE_L^J|_inf.

    The contract is a value below 1e-9 * (1 + cond(Hess)) whenever the
    solve succeeds.
    """
    coords = as_point(p, L.dim)
    violation, condition = identity_violation(L.jet(coords), coords, J)
    _log.debug("dynamics identity at %s for %s: %.3e (cond %.3e)", coords, J.kind, violation, condition)
    return violation
