"""
Built-in Lagrangian catalog.

All built-ins are L = T - P with a quadratic kinetic part T in the chart
coordinates (every block treated alike) and a potential P.
"""

from typing import List, Sequence

import numpy as np

from config.settings import GRAVITY_EXCLUSION_RADIUS
from src.app.calculus.dual import Dual2
from src.app.calculus.fields import DifferenceField, ExpressionField, Point, ScalarField
from src.app.geometry.structure import ChartDim
from src.core.errors import DomainError


class BuiltinLagrangian(DifferenceField):
    """Base class for catalog entries; subclasses fill in T and P."""

    name = "builtin"
    param_names: Sequence[str] = ()

    @classmethod
    def from_params(cls, dim: ChartDim, params: List[float]) -> "BuiltinLagrangian":
        raise NotImplementedError

    def kinetic(self) -> ScalarField:
        return self.kinetic_part

    def potential(self) -> ScalarField:
        return self.potential_part

    def describe(self) -> str:
        return self.name


def _zero(dim: ChartDim) -> ScalarField:
    return ExpressionField(dim, lambda x: Dual2(0.0), "zero")


class FreeQuadratic(BuiltinLagrangian):
    """L(x) = m/2 |x|^2."""

    param_names = ("m",)

    def __init__(self, dim: ChartDim, m: float = 1.0):
        if not m > 0:
            raise ValueError(f"free_quadratic needs m > 0, got {m}")
        self.m = float(m)
        kinetic = ExpressionField(dim, lambda x: 0.5 * self.m * (x * x).sum(), "T")
        super().__init__(kinetic, _zero(dim), "free_quadratic")

    @classmethod
    def from_params(cls, dim: ChartDim, params: List[float]) -> "FreeQuadratic":
        if len(params) > 1:
            raise ValueError("free_quadratic takes one parameter: m")
        return cls(dim, *params)

    def describe(self) -> str:
        return f"free_quadratic(m={self.m:g})"


class Gravity(BuiltinLagrangian):
    """L(x) = m/2 |x|^2 - m g |x|, with height h = distance to the origin."""

    param_names = ("m", "g")

    def __init__(self, dim: ChartDim, m: float = 1.0, g: float = 9.8):
        if not m > 0:
            raise ValueError(f"gravity needs m > 0, got {m}")
        if not g >= 0:
            raise ValueError(f"gravity needs g >= 0, got {g}")
        self.m = float(m)
        self.g = float(g)
        kinetic = ExpressionField(dim, lambda x: 0.5 * self.m * (x * x).sum(), "T")
        potential = ExpressionField(dim, lambda x: self.m * self.g * (x * x).sum().sqrt(), "P")
        super().__init__(kinetic, potential, "gravity")

    def check_domain(self, coords: Point) -> None:
        if np.linalg.norm(coords) < GRAVITY_EXCLUSION_RADIUS:
            raise DomainError(
                f"gravity Lagrangian is not smooth within {GRAVITY_EXCLUSION_RADIUS:g} of the origin"
            )

    @classmethod
    def from_params(cls, dim: ChartDim, params: List[float]) -> "Gravity":
        if len(params) > 2:
            raise ValueError("gravity takes two parameters: m, g")
        return cls(dim, *params)

    def describe(self) -> str:
        return f"gravity(m={self.m:g}, g={self.g:g})"


class AnisotropicQuadratic(BuiltinLagrangian):
    """L(x) = 1/2 sum_a w_a x_a^2."""

    param_names = ("w_0", "...", "w_{4n-1}")

    def __init__(self, dim: ChartDim, weights: Sequence[float]):
        w = np.asarray(weights, dtype=float)
        if w.shape != (dim.total,):
            raise ValueError(
                f"anisotropic_quadratic needs {dim.total} weights for n={dim.n}, got {w.size}"
            )
        if np.any(w == 0.0):
            raise ValueError("anisotropic_quadratic weights must all be non-zero")
        self.weights = w
        kinetic = ExpressionField(dim, lambda x: 0.5 * (x * x * self.weights).sum(), "T")
        super().__init__(kinetic, _zero(dim), "anisotropic_quadratic")

    @classmethod
    def from_params(cls, dim: ChartDim, params: List[float]) -> "AnisotropicQuadratic":
        return cls(dim, params)

    def describe(self) -> str:
        return "anisotropic_quadratic(w=" + ",".join(f"{w:g}" for w in self.weights) + ")"
