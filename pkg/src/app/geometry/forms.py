"""
Differential forms in coordinates: vertical differentials d_J L, the
Kaehler two-forms -d(d_J L), and the metric fundamental forms.

Pairing convention: (dx_a ^ dx_b)(X, Y) = X_a Y_b - X_b Y_a, so a two-form
evaluates as X^T M Y.
"""

from dataclasses import dataclass
from typing import List, Tuple, Union

import numpy as np

from config.settings import (
    ANTISYMMETRY_TOL,
    FORM_AGREEMENT_TOL,
    METRIC_COMPATIBILITY_TOL,
    METRIC_SYMMETRY_TOL,
)
from src.app.calculus.fields import Jet2, ScalarField
from src.app.geometry.structure import ChartDim, SignedPermutation, StructureKind, StructureOperator, build_all
from src.app.geometry.term_tables import VERTICAL_TERMS, WEDGE_TERMS
from src.core.errors import CompatibilityError, DimensionError, InconsistencyError
from src.core.logger import get_logger


_log = get_logger("forms")


@dataclass(frozen=True)
class OneForm:
    """A covector on R^{4n}."""

    components: np.ndarray

    def __post_init__(self):
        comps = np.array(self.components, dtype=float)
        if comps.ndim != 1:
            raise DimensionError("one-form components must be a vector")
        if not np.all(np.isfinite(comps)):
            raise ValueError("one-form has non-finite components")
        comps.setflags(write=False)
        object.__setattr__(self, "components", comps)

    def evaluate(self, x) -> float:
        return float(self.components @ np.asarray(x, dtype=float))


@dataclass(frozen=True)
class TwoForm:
    """An antisymmetric bilinear form with Φ(X, Y) = X^T matrix Y."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"two-form matrix must be square, got shape {m.shape}")
        asym = float(np.max(np.abs(m + m.T))) if m.size else 0.0
        if asym > ANTISYMMETRY_TOL:
            raise ValueError(f"two-form matrix is not antisymmetric (|M + M^T| = {asym:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def evaluate(self, x, y) -> float:
        return float(np.asarray(x, dtype=float) @ self.matrix @ np.asarray(y, dtype=float))


@dataclass(frozen=True)
class MetricTensor:
    """Constant symmetric positive-definite metric on the chart."""

    matrix: np.ndarray

    def __post_init__(self):
        g = np.array(self.matrix, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise DimensionError(f"metric must be square, got shape {g.shape}")
        if np.max(np.abs(g - g.T)) > METRIC_SYMMETRY_TOL:
            raise ValueError("metric is not symmetric")
        try:
            np.linalg.cholesky(g)
        except np.linalg.LinAlgError:
            raise ValueError("metric is not positive definite") from None
        g.setflags(write=False)
        object.__setattr__(self, "matrix", g)

    @classmethod
    def identity(cls, dim: ChartDim, scale: float = 1.0) -> "MetricTensor":
        return cls(scale * np.eye(dim.total))

    @classmethod
    def diagonal(cls, weights) -> "MetricTensor":
        return cls(np.diag(np.asarray(weights, dtype=float)))


@dataclass(frozen=True)
class Compatibility:
    compatible: bool
    violation: float


@dataclass(frozen=True)
class WedgeDiscrepancy:
    """One matrix entry where the wedge-term assembly and the compact form differ."""

    row: int
    col: int
    literal: float
    compact: float


# ---------------------------------------------------------------------------
# Vertical derivation and differential
# ---------------------------------------------------------------------------

def vertical_derivation(form: Union[OneForm, TwoForm], J: SignedPermutation):
    """
    The derivation i_J induced by a structure operator.

    On one-forms (i_J w)(X) = w(JX); on two-forms
    (i_J w)(X, Y) = w(JX, Y) + w(X, JY).
    """
    if isinstance(form, OneForm):
        return OneForm(J.apply_transpose(form.components))
    m = form.matrix
    return TwoForm(J.right_multiply(m) + J.right_multiply(m.T).T)


def vertical_pattern(gradient: np.ndarray, kind: StructureKind, dim: ChartDim) -> np.ndarray:
    """d_J L assembled from the coordinate term table."""
    out = np.zeros(dim.total)
    for block, partial, sign in VERTICAL_TERMS[kind]:
        for i in range(dim.n):
            out[block * dim.n + i] = sign * gradient[partial * dim.n + i]
    return out


def vertical_differential_from_jet(jet: Jet2, J: StructureOperator) -> OneForm:
    compact = vertical_derivation(OneForm(jet.gradient), J)
    if J.kind is not None:
        pattern = vertical_pattern(jet.gradient, J.kind, J.dim)
        deviation = float(np.max(np.abs(pattern - compact.components)))
        if deviation > 0.0:
            raise InconsistencyError(f"vertical differential pattern disagrees for {J.kind}", deviation)
    return compact


def vertical_differential(L: ScalarField, p, J: StructureOperator) -> OneForm:
    """
    d_J L at p, computed as i_J(dL), i.e. components (J^T ∇L)_a.

    Raises:
        DomainError: If L is not smooth at p.
        InconsistencyError: If the block pattern disagrees with i_J(dL).
    """
    return vertical_differential_from_jet(L.jet(p), J)


# ---------------------------------------------------------------------------
# Kaehler two-forms
# ---------------------------------------------------------------------------

def compact_two_form_matrix(hessian: np.ndarray, J: SignedPermutation) -> np.ndarray:
    """-(J Hess + Hess J)."""
    return -(J.left_multiply(hessian) + J.right_multiply(hessian))


def wedge_assembly(hessian: np.ndarray, kind: StructureKind, dim: ChartDim) -> np.ndarray:
    """
    Assemble -d(d_J L) term by term from the wedge table.

    Each term  c * dx_k ^ dx_a  adds c to M[k, a] and subtracts it from M[a, k].
    """
    n = dim.n
    m = np.zeros((dim.total, dim.total))
    for a_block, hess_block, sign in WEDGE_TERMS[kind]:
        for c in range(4):
            for j in range(n):
                k = c * n + j
                for i in range(n):
                    a = a_block * n + i
                    coeff = sign * hessian[k, hess_block * n + i]
                    m[k, a] += coeff
                    m[a, k] -= coeff
    return m


def wedge_discrepancies(
    hessian: np.ndarray, J: StructureOperator, tol: float = FORM_AGREEMENT_TOL
) -> Tuple[float, List[WedgeDiscrepancy]]:
    """Max deviation between the two assemblies and the entries beyond tol."""
    literal = wedge_assembly(hessian, J.kind, J.dim)
    compact = compact_two_form_matrix(hessian, J)
    diff = np.abs(literal - compact)
    rows, cols = np.nonzero(diff > tol)
    found = [WedgeDiscrepancy(int(r), int(c), float(literal[r, c]), float(compact[r, c]))
             for r, c in zip(rows, cols)]
    return float(diff.max()) if diff.size else 0.0, found


def kahler_two_form_from_jet(jet: Jet2, J: StructureOperator) -> TwoForm:
    compact = compact_two_form_matrix(jet.hessian, J)
    if J.kind is not None:
        deviation, found = wedge_discrepancies(jet.hessian, J)
        if found:
            _log.error("wedge assembly disagrees for %s at %d entries", J.kind, len(found))
            raise InconsistencyError(f"wedge assembly disagrees with compact form for {J.kind}", deviation)
    return TwoForm(compact)


def kahler_two_form(L: ScalarField, p, J: StructureOperator) -> TwoForm:
    """
    The Kaehler two-form -d(d_J L) at p.

    The matrix is assembled both from the wedge-term table and from the
    compact formula -(J Hess + Hess J); the compact one is returned after
    the two are checked against each other.

    Raises:
        DomainError: If L is not smooth at p.
        InconsistencyError: If the assemblies disagree beyond tolerance.
    """
    return kahler_two_form_from_jet(L.jet(p), J)


# ---------------------------------------------------------------------------
# Metric
# ---------------------------------------------------------------------------

def metric_compatibility(g: Union[MetricTensor, np.ndarray], J: SignedPermutation) -> Compatibility:
    """
    Max over basis pairs of |g(Je_a, e_b) + g(e_a, Je_b)|, i.e. of |J^T g + g J|.

    Accepts a MetricTensor or any square array, so degenerate
    candidates can be rejected here too.
    """
    m = g.matrix if isinstance(g, MetricTensor) else np.asarray(g, dtype=float)
    if m.shape != (J.dim.total, J.dim.total):
        raise DimensionError(f"metric shape {m.shape} does not match 4n={J.dim.total}")
    violation = float(np.max(np.abs(J.right_multiply(m.T).T + J.right_multiply(m))))
    return Compatibility(violation < METRIC_COMPATIBILITY_TOL, violation)


def fundamental_two_forms(g: MetricTensor, dim: ChartDim) -> Tuple[TwoForm, TwoForm, TwoForm]:
    """
    The fundamental forms Φ(X,Y) = g(FX,Y), Ψ(X,Y) = g(GX,Y), Θ(X,Y) = g(HX,Y).

    Returns:
        Matrices F^T g, G^T g, H^T g as TwoForms.

    Raises:
        CompatibilityError: Naming the first structure g is not compatible with.
    """
    forms = []
    for kind, J in build_all(dim).items():
        check = metric_compatibility(g, J)
        if not check.compatible:
            raise CompatibilityError(kind, check.violation)
        forms.append(TwoForm(J.right_multiply(g.matrix.T).T))
    return forms[0], forms[1], forms[2]
