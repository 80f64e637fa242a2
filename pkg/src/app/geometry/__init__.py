"""
Quaternionic structures on R^{4n} and the forms built from them.

Only the structure operators are re-exported here; import two-forms and
metrics from src.app.geometry.forms.
"""

from src.app.geometry.structure import (
    ChartDim,
    SignedPermutation,
    StructureKind,
    StructureOperator,
    build_all,
    build_structure,
    verify_relations,
)

__all__ = [
    "ChartDim",
    "SignedPermutation",
    "StructureKind",
    "StructureOperator",
    "build_all",
    "build_structure",
    "verify_relations",
]
