"""
Coordinate term tables, transcribed block by block from the displayed
coordinate expansions of each structure.

These tables are kept independent of BLOCK_ACTIONS in structure.py. The
compact matrix formulas are the production path; assemblies built from these
tables are the oracle that guards their sign conventions.

Every entry is indexed by 0-based blocks; i and j run over 0..n-1 inside a block.
"""

from typing import Dict, Tuple

from src.app.geometry.structure import StructureKind


Terms = Tuple[Tuple[int, int, int], ...]


# Vertical differential d_J L: (dx block, partial block, sign)
#   d_J L = sum_i sign * dL/dx_{partial*n+i} dx_{block*n+i}
VERTICAL_TERMS: Dict[StructureKind, Terms] = {
    StructureKind.F: ((0, 1, 1), (1, 0, -1), (2, 3, 1), (3, 2, -1)),
    StructureKind.G: ((0, 2, 1), (1, 3, -1), (2, 0, -1), (3, 1, 1)),
    StructureKind.H: ((0, 3, 1), (1, 2, 1), (2, 1, -1), (3, 0, -1)),
}

# Liouville field and energy: (velocity block, partial block, sign)
#   V_J = sum_i sign * X^{block*n+i} d/dx_{partial*n+i}
#   E   = sum_i sign * X^{block*n+i} dL/dx_{partial*n+i} - L
ENERGY_TERMS: Dict[StructureKind, Terms] = {
    StructureKind.F: ((0, 1, 1), (1, 0, -1), (2, 3, 1), (3, 2, -1)),
    StructureKind.G: ((0, 2, 1), (1, 3, -1), (2, 0, -1), (3, 1, 1)),
    StructureKind.H: ((0, 3, 1), (1, 2, 1), (2, 1, -1), (3, 0, -1)),
}

# Kaehler two-form -d(d_J L): (dx block a, Hessian column block, sign); each entry
# expands over every row block c to
#   sign * d2L/dx_{c*n+j} dx_{hess*n+i}  dx_{c*n+j} ^ dx_{a*n+i}
WEDGE_TERMS: Dict[StructureKind, Terms] = {
    StructureKind.F: ((0, 1, -1), (1, 0, 1), (2, 3, -1), (3, 2, 1)),
    StructureKind.G: ((0, 2, -1), (1, 3, 1), (2, 0, 1), (3, 1, -1)),
    StructureKind.H: ((0, 3, -1), (1, 2, -1), (2, 1, 1), (3, 0, 1)),
}

# Bracketed linear system of the dynamics equation: (dx block c, Hessian column block, sign)
#   sign * [sum_{b,i} X^{b*n+i} d2L/dx_{b*n+i} dx_{hess*n+j}] + dL/dx_{c*n+j} = 0
BRACKET_TERMS: Dict[StructureKind, Terms] = {
    StructureKind.F: ((0, 1, -1), (1, 0, 1), (2, 3, -1), (3, 2, 1)),
    StructureKind.G: ((0, 2, -1), (1, 3, 1), (2, 0, 1), (3, 1, -1)),
    StructureKind.H: ((0, 3, -1), (1, 2, -1), (2, 1, 1), (3, 0, 1)),
}

# Euler-Lagrange equations: (equation block, partial block, sign)
#   d/dt(dL/dx_{block*n+i}) + sign * dL/dx_{partial*n+i} = 0
EULER_LAGRANGE_TERMS: Dict[StructureKind, Terms] = {
    StructureKind.F: ((0, 1, 1), (1, 0, -1), (2, 3, 1), (3, 2, -1)),
    StructureKind.G: ((0, 2, 1), (1, 3, -1), (2, 0, -1), (3, 1, 1)),
    StructureKind.H: ((0, 3, 1), (1, 2, 1), (2, 1, -1), (3, 0, -1)),
}
