"""
Scalar fields on the chart and their second-order jets.

A ScalarField describes a Lagrangian as an expression over Dual2 numbers;
jet() evaluates it once to get the exact value, gradient and Hessian.
fd_oracle() is the independent central-difference path used by tests and
the validation suite.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable

import numpy as np

from src.app.calculus.dual import Dual2
from src.app.geometry.structure import ChartDim, as_vector
from src.core.errors import DimensionError, DomainError


# Coordinates of a chart point: float array of length 4n
Point = np.ndarray


def as_point(p, dim: ChartDim) -> Point:
    """Validate a chart point: length 4n and finite entries."""
    coords = as_vector(p, dim, "point")
    if not np.all(np.isfinite(coords)):
        raise DomainError("point has non-finite coordinates")
    return coords


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Jet2:
    """Value, gradient and (symmetrized) Hessian of a field at a point."""

    value: float
    gradient: np.ndarray
    hessian: np.ndarray
    asymmetry: float = 0.0

    @classmethod
    def from_raw(cls, value, gradient, hessian) -> "Jet2":
        """
        Build a jet from raw derivative data.

        The Hessian is averaged with its transpose; the largest difference
        seen before averaging is kept in ``asymmetry``.

        Raises:
            DomainError: If any entry is not finite.
        """
        value = float(value)
        gradient = np.array(gradient, dtype=float)
        hessian = np.array(hessian, dtype=float)
        if not (np.isfinite(value) and np.all(np.isfinite(gradient)) and np.all(np.isfinite(hessian))):
            raise DomainError("field value or derivatives are not finite at this point")
        asymmetry = float(np.max(np.abs(hessian - hessian.T))) if hessian.size else 0.0
        hessian = 0.5 * (hessian + hessian.T)
        return cls(value, _frozen(gradient), _frozen(hessian), asymmetry)

    @property
    def size(self) -> int:
        return self.gradient.shape[0]


class ScalarField(ABC):
    """Abstract base class for Lagrangians L: R^{4n} -> R."""

    name: str = "field"

    def __init__(self, dim: ChartDim):
        self.dim = dim

    @abstractmethod
    def expression(self, x: Dual2) -> Dual2:
        """
        The field written over AD numbers.

        Args:
            x: Vector-shaped Dual2 holding the 4n coordinates.

        Returns:
            Scalar-shaped Dual2 (or a constant).
        """

    def check_domain(self, coords: Point) -> None:
        """Raise DomainError when the field is not smooth at coords."""

    def evaluate(self, p, order: int = 2) -> Dual2:
        """Evaluate with derivatives tracked up to ``order`` (0, 1 or 2)."""
        coords = as_point(p, self.dim)
        self.check_domain(coords)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            out = Dual2._coerce(self.expression(Dual2.variables(coords, order)))
        if out.val.shape != ():
            raise DimensionError(f"{self.name} did not evaluate to a scalar")
        return out

    def value(self, p) -> float:
        out = self.evaluate(p, order=0)
        value = float(out.val)
        if not np.isfinite(value):
            raise DomainError(f"{self.name} is not finite at this point")
        return value

    def jet(self, p) -> Jet2:
        out = self.evaluate(p, order=2)
        size = self.dim.total
        gradient = out.grad if out.grad is not None else np.zeros(size)
        hessian = out.hess if out.hess is not None else np.zeros((size, size))
        return Jet2.from_raw(out.val, gradient, hessian)


class ExpressionField(ScalarField):
    """A field given by a Python function over Dual2 numbers."""

    def __init__(self, dim: ChartDim, fn: Callable[[Dual2], Dual2], name: str = "expression"):
        super().__init__(dim)
        self._fn = fn
        self.name = name

    def expression(self, x: Dual2) -> Dual2:
        return self._fn(x)


class DifferenceField(ScalarField):
    """L = T - P built from two fields on the same chart."""

    def __init__(self, kinetic: ScalarField, potential: ScalarField, name: str = "T - P"):
        if kinetic.dim != potential.dim:
            raise DimensionError("kinetic and potential parts live on different charts")
        super().__init__(kinetic.dim)
        self.kinetic_part = kinetic
        self.potential_part = potential
        self.name = name

    def check_domain(self, coords: Point) -> None:
        self.kinetic_part.check_domain(coords)
        self.potential_part.check_domain(coords)

    def expression(self, x: Dual2) -> Dual2:
        return Dual2._coerce(self.kinetic_part.expression(x)) - self.potential_part.expression(x)


def jet(field: ScalarField, p) -> Jet2:
    """Exact value, gradient and Hessian of ``field`` at ``p``."""
    return field.jet(p)


def fd_oracle(field: ScalarField, p, step: float) -> Jet2:
    """
    Central-difference gradient and Hessian, both O(step^2).

    Args:
        field: Field to differentiate (value-only evaluations are used).
        p: Point inside the smooth domain.
        step: Difference step, > 0.

    Returns:
        Jet2 built from differences only.

    Raises:
        ValueError: If step is not positive.
        DomainError: If any stencil point leaves the field's domain.
    """
    if not step > 0:
        raise ValueError(f"finite-difference step must be positive, got {step}")
    x = as_point(p, field.dim)
    size = field.dim.total
    f0 = field.value(x)
    basis = np.eye(size) * step

    plus = np.array([field.value(x + basis[a]) for a in range(size)])
    minus = np.array([field.value(x - basis[a]) for a in range(size)])
    gradient = (plus - minus) / (2.0 * step)

    hessian = np.empty((size, size))
    for a in range(size):
        hessian[a, a] = (plus[a] - 2.0 * f0 + minus[a]) / (step * step)
        for b in range(a + 1, size):
            fpp = field.value(x + basis[a] + basis[b])
            fpm = field.value(x + basis[a] - basis[b])
            fmp = field.value(x - basis[a] + basis[b])
            fmm = field.value(x - basis[a] - basis[b])
            hessian[a, b] = hessian[b, a] = (fpp - fpm - fmp + fmm) / (4.0 * step * step)
    return Jet2.from_raw(f0, gradient, hessian)
