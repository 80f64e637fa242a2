"""
Structure operators F, G, H on the flat chart R^{4n}.

Each operator is stored as a signed permutation of the coordinate axes:
basis vector e_a is sent to signs[a] * e_{targets[a]}. Blocks are 0-based,
B0 = [0, n), B1 = [n, 2n), B2 = [2n, 3n), B3 = [3n, 4n).
"""

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.core.errors import DimensionError
from src.core.logger import get_logger


_log = get_logger("structure")


@dataclass(frozen=True)
class ChartDim:
    """Chart dimension: block size n and total dimension 4n."""

    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise DimensionError(f"block size must be an integer, got {self.n!r}")
        if self.n < 1:
            raise DimensionError(f"block size must be at least 1, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def total(self) -> int:
        return 4 * self.n

    def block(self, b: int) -> range:
        """Index range of block b (0..3)."""
        return range(b * self.n, (b + 1) * self.n)


class StructureKind(IntEnum):
    """The three structure operators, ordered F < G < H."""

    F = 0
    G = 1
    H = 2

    def __str__(self) -> str:
        return self.name

    @classmethod
    def parse(cls, text: str) -> "StructureKind":
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise ValueError(f"Unknown structure: {text!r} (choose F, G or H)") from None


# (source block, target block, sign) for each operator
BLOCK_ACTIONS: Dict[StructureKind, Tuple[Tuple[int, int, int], ...]] = {
    StructureKind.F: ((0, 1, 1), (1, 0, -1), (2, 3, 1), (3, 2, -1)),
    StructureKind.G: ((0, 2, 1), (1, 3, -1), (2, 0, -1), (3, 1, 1)),
    StructureKind.H: ((0, 3, 1), (1, 2, 1), (2, 1, -1), (3, 0, -1)),
}


def as_vector(v, dim: ChartDim, what: str = "vector") -> np.ndarray:
    """Return v as a float array of length 4n or raise DimensionError."""
    arr = np.asarray(v, dtype=float)
    if arr.shape != (dim.total,):
        raise DimensionError(
            f"{what} must have length {dim.total} for n={dim.n}, got shape {arr.shape}"
        )
    return arr


@dataclass(frozen=True)
class SignedPermutation:
    """A linear map sending each basis vector to plus or minus another one."""

    dim: ChartDim
    targets: Tuple[int, ...]
    signs: Tuple[int, ...]

    def __post_init__(self):
        total = self.dim.total
        if len(self.targets) != total or len(self.signs) != total:
            raise DimensionError(
                f"signed permutation needs {total} entries, got "
                f"{len(self.targets)} targets and {len(self.signs)} signs"
            )
        if any(t < 0 or t >= total for t in self.targets):
            raise DimensionError(f"target index out of range [0, {total})")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")

    @classmethod
    def identity(cls, dim: ChartDim) -> "SignedPermutation":
        return cls(dim, tuple(range(dim.total)), (1,) * dim.total)

    def __neg__(self) -> "SignedPermutation":
        return SignedPermutation(self.dim, self.targets, tuple(-s for s in self.signs))

    def same_action(self, other: "SignedPermutation") -> bool:
        """Entry-for-entry equality of the action, ignoring any kind label."""
        return (
            self.dim == other.dim
            and self.targets == other.targets
            and self.signs == other.signs
        )

    def is_bijection(self) -> bool:
        return len(set(self.targets)) == self.dim.total

    def matrix(self) -> np.ndarray:
        """Dense integer matrix with M[target, a] = sign."""
        m = np.zeros((self.dim.total, self.dim.total), dtype=np.int64)
        m[list(self.targets), list(range(self.dim.total))] = self.signs
        return m

    def apply(self, v) -> np.ndarray:
        """Return J v."""
        x = as_vector(v, self.dim)
        out = np.zeros_like(x)
        out[list(self.targets)] = np.asarray(self.signs, dtype=float) * x
        return out

    def apply_transpose(self, v) -> np.ndarray:
        """Return J^T v, i.e. (J^T v)_a = sign_a * v[target_a]."""
        x = as_vector(v, self.dim)
        return np.asarray(self.signs, dtype=float) * x[list(self.targets)]

    def left_multiply(self, m: np.ndarray) -> np.ndarray:
        """Return J @ m without floating-point products."""
        out = np.zeros_like(m, dtype=float)
        out[list(self.targets), :] = np.asarray(self.signs, dtype=float)[:, None] * m
        return out

    def right_multiply(self, m: np.ndarray) -> np.ndarray:
        """Return m @ J without floating-point products."""
        return m[:, list(self.targets)] * np.asarray(self.signs, dtype=float)[None, :]


@dataclass(frozen=True)
class StructureOperator(SignedPermutation):
    """One of F, G, H as a signed permutation."""

    kind: Optional[StructureKind] = field(default=None)


def build_structure(kind: StructureKind, dim: ChartDim) -> StructureOperator:
    """
    Build the signed permutation for F, G or H.

    Args:
        kind: Which operator.
        dim: Chart dimension.

    Returns:
        StructureOperator whose block action follows BLOCK_ACTIONS.
    """
    kind = StructureKind(kind)
    targets = [0] * dim.total
    signs = [0] * dim.total
    for source, target, sign in BLOCK_ACTIONS[kind]:
        for i in range(dim.n):
            targets[source * dim.n + i] = target * dim.n + i
            signs[source * dim.n + i] = sign
    return StructureOperator(dim, tuple(targets), tuple(signs), kind)


def build_all(dim: ChartDim) -> Dict[StructureKind, StructureOperator]:
    """F, G and H for one chart, in F < G < H order."""
    return {kind: build_structure(kind, dim) for kind in StructureKind}


def apply(op: SignedPermutation, v) -> np.ndarray:
    """Return op · v."""
    return op.apply(v)


def compose(a: SignedPermutation, b: SignedPermutation) -> SignedPermutation:
    """
    Return the signed permutation a∘b (apply b first).

    Raises:
        DimensionError: If the operators live on different charts.
    """
    if a.dim != b.dim:
        raise DimensionError(f"cannot compose operators for n={a.dim.n} and n={b.dim.n}")
    targets = tuple(a.targets[t] for t in b.targets)
    signs = tuple(b.signs[i] * a.signs[t] for i, t in enumerate(b.targets))
    return SignedPermutation(a.dim, targets, signs)


@dataclass(frozen=True)
class RelationCheck:
    """One named algebraic check and its integer violation."""

    name: str
    passed: bool
    violation: int = 0


@dataclass
class RelationReport:
    dim: ChartDim
    checks: List[RelationCheck]

    @property
    def all_passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def max_violation(self) -> int:
        return max((check.violation for check in self.checks), default=0)

    def failures(self) -> List[RelationCheck]:
        return [check for check in self.checks if not check.passed]


def _equality_check(name: str, got: SignedPermutation, expected: SignedPermutation) -> RelationCheck:
    diff = int(np.max(np.abs(got.matrix() - expected.matrix())))
    return RelationCheck(name, got.same_action(expected), diff)


def verify_relations(
    dim: ChartDim,
    operators: Optional[Dict[StructureKind, SignedPermutation]] = None,
) -> RelationReport:
    """
    Exercise the quaternion algebra of F, G, H.

    Checks the squares, the six products, the triple product FGH = -I,
    and bijectivity, antisymmetry and orthogonality of each operator.
    Failures are reported, not raised.

    Args:
        dim: Chart dimension.
        operators: Optional replacement operators (used to check corrupted ones).

    Returns:
        RelationReport with one entry per check.
    """
    ops: Dict[StructureKind, SignedPermutation] = dict(build_all(dim))
    if operators:
        ops.update(operators)
    F, G, H = ops[StructureKind.F], ops[StructureKind.G], ops[StructureKind.H]
    minus_identity = -SignedPermutation.identity(dim)

    checks = [
        _equality_check("F^2 = -I", compose(F, F), minus_identity),
        _equality_check("G^2 = -I", compose(G, G), minus_identity),
        _equality_check("H^2 = -I", compose(H, H), minus_identity),
        _equality_check("GH = F", compose(G, H), F),
        _equality_check("HG = -F", compose(H, G), -F),
        _equality_check("HF = G", compose(H, F), G),
        _equality_check("FH = -G", compose(F, H), -G),
        _equality_check("FG = H", compose(F, G), H),
        _equality_check("GF = -H", compose(G, F), -H),
        _equality_check("FGH = -I", compose(F, compose(G, H)), minus_identity),
    ]

    identity = np.eye(dim.total, dtype=np.int64)
    for kind, op in ops.items():
        m = op.matrix()
        checks.append(RelationCheck(f"{kind} bijective", op.is_bijection(),
                                    0 if op.is_bijection() else 1))
        sym = int(np.max(np.abs(m + m.T)))
        checks.append(RelationCheck(f"{kind} antisymmetric", sym == 0, sym))
        orth = int(np.max(np.abs(m.T @ m - identity)))
        checks.append(RelationCheck(f"{kind} orthogonal", orth == 0, orth))

    report = RelationReport(dim, checks)
    if not report.all_passed:
        _log.warning(
            "quaternion relations failed for n=%d: %s",
            dim.n, ", ".join(c.name for c in report.failures()),
        )
    return report


def format_matrix(m: np.ndarray) -> str:
    """Row-major, space-separated rendering of an integer matrix."""
    return "\n".join(" ".join(str(int(v)) for v in row) for row in m)


def random_unit_vector(rng: np.random.Generator, dim: ChartDim) -> np.ndarray:
    """Random unit vector in R^{4n}."""
    v = rng.standard_normal(dim.total)
    return v / np.linalg.norm(v)


def corrupt(op: SignedPermutation, index: int) -> SignedPermutation:
    """Copy of op with the sign of one action entry flipped."""
    signs = list(op.signs)
    signs[index] = -signs[index]
    return SignedPermutation(op.dim, op.targets, tuple(signs))

