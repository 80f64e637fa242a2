"""
The derivation chain at one point, as printed by `derive`.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from src.app.calculus.builtins import BuiltinLagrangian
from src.app.calculus.fields import ScalarField, as_point
from src.app.geometry.forms import kahler_two_form_from_jet, vertical_differential_from_jet
from src.app.geometry.structure import StructureKind, StructureOperator
from src.app.mechanics.dynamics import (
    el_residual_from_jet,
    energy_differential_from_jet,
    energy_from_jet,
    liouville_field,
    solve_semispray_from_jet,
)
from src.core.logger import get_logger


_log = get_logger("derivation")


@dataclass(frozen=True)
class Derivation:
    lagrangian: str
    structure: StructureKind
    point: np.ndarray
    value: float
    gradient: np.ndarray
    hessian: np.ndarray
    vertical_differential: np.ndarray
    phi: np.ndarray
    velocity: np.ndarray
    liouville: np.ndarray
    energy: float
    energy_differential: np.ndarray
    residual_blocks: List[np.ndarray]
    residual_norm: float
    condition: float
    literal_deviation: Optional[float] = None
    kinetic: Optional[float] = None
    potential: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        out = {
            "lagrangian": self.lagrangian,
            "structure": str(self.structure),
            "point": self.point.tolist(),
            "value": self.value,
            "gradient": self.gradient.tolist(),
            "hessian": self.hessian.tolist(),
            "vertical_differential": self.vertical_differential.tolist(),
            "phi": self.phi.tolist(),
            "xi": self.velocity.tolist(),
            "liouville": self.liouville.tolist(),
            "energy": self.energy,
            "energy_differential": self.energy_differential.tolist(),
            "residual_blocks": [b.tolist() for b in self.residual_blocks],
            "residual_norm": self.residual_norm,
            "condition": self.condition,
            "literal_deviation": self.literal_deviation,
        }
        if self.kinetic is not None:
            out["kinetic"] = self.kinetic
            out["potential"] = self.potential
        return out


def derive(L: ScalarField, J: StructureOperator, p) -> Derivation:
    """
    Evaluate every object of the chain at p with one jet.

    Raises:
        DomainError: L is not smooth at p.
        SingularHessianError: The semispray cannot be solved.
    """
    coords = as_point(p, L.dim)
    jet = L.jet(coords)
    xi = solve_semispray_from_jet(jet, coords, J)
    residual = el_residual_from_jet(jet, xi.velocity, J)

    kinetic = potential = None
    if isinstance(L, BuiltinLagrangian):
        kinetic = L.kinetic().value(coords)
        potential = L.potential().value(coords)

    _log.info("derived %s for %s at %s (cond %.3e)", L.name, J.kind, coords.tolist(), xi.condition)
    return Derivation(
        lagrangian=L.describe() if isinstance(L, BuiltinLagrangian) else L.name,
        structure=J.kind,
        point=coords,
        value=jet.value,
        gradient=np.array(jet.gradient),
        hessian=np.array(jet.hessian),
        vertical_differential=np.array(vertical_differential_from_jet(jet, J).components),
        phi=np.array(kahler_two_form_from_jet(jet, J).matrix),
        velocity=xi.velocity,
        liouville=liouville_field(J, xi),
        energy=energy_from_jet(jet, xi.velocity, J),
        energy_differential=energy_differential_from_jet(jet, xi.velocity, J),
        residual_blocks=residual.blocks(),
        residual_norm=residual.norm,
        condition=xi.condition,
        literal_deviation=xi.literal_deviation,
        kinetic=kinetic,
        potential=potential,
    )
