"""
Second-order forward-mode AD number.

A Dual2 carries a value together with its gradient and Hessian with respect
to the chart coordinates. It is the hyper-dual number (v, e1, e2, e1e2)
evaluated for every coordinate pair at once: the gradient holds the e1 (= e2)
parts and the Hessian holds the e1e2 parts of all pairwise seeds.

Values may be scalars or 1-d arrays (shape S); gradients then have shape
S + (N,) and Hessians S + (N, N). A missing gradient or Hessian (None) means
the number is constant in that order, or that the order is not tracked.
"""

from __future__ import annotations

from typing import Optional, Union

import numpy as np

from src.core.errors import DomainError


Number = Union[int, float, np.ndarray]


def _scale(factor: np.ndarray, part: Optional[np.ndarray], extra: int) -> Optional[np.ndarray]:
    if part is None:
        return None
    index = (Ellipsis,) + (None,) * extra
    return np.asarray(factor)[index] * part


def _add(x: Optional[np.ndarray], y: Optional[np.ndarray]) -> Optional[np.ndarray]:
    if x is None:
        return y
    if y is None:
        return x
    return x + y


def _outer(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x[..., :, None] * y[..., None, :]


class Dual2:
    """Value, gradient and Hessian propagated together through arithmetic."""

    __slots__ = ("val", "grad", "hess")

    def __init__(
        self,
        val: Number,
        grad: Optional[np.ndarray] = None,
        hess: Optional[np.ndarray] = None,
    ):
        self.val = np.asarray(val, dtype=float)
        self.grad = grad
        self.hess = hess

    @classmethod
    def variables(cls, point, order: int = 2) -> "Dual2":
        """Seed the coordinates of a point as a vector of independent variables."""
        x = np.array(point, dtype=float)
        size = x.size
        grad = np.eye(size) if order >= 1 else None
        hess = np.zeros((size, size, size)) if order >= 2 else None
        return cls(x, grad, hess)

    @staticmethod
    def _coerce(x: Union["Dual2", Number]) -> "Dual2":
        return x if isinstance(x, Dual2) else Dual2(x)

    @property
    def order(self) -> int:
        if self.grad is None:
            return 0
        return 1 if self.hess is None else 2

    def __repr__(self) -> str:
        return f"Dual2(val={self.val!r}, order={self.order})"

    # ---------- structure ----------
    def __getitem__(self, index) -> "Dual2":
        return Dual2(
            self.val[index],
            None if self.grad is None else self.grad[index],
            None if self.hess is None else self.hess[index],
        )

    def sum(self) -> "Dual2":
        """Sum over the leading (vector) axis."""
        return Dual2(
            self.val.sum(axis=0),
            None if self.grad is None else self.grad.sum(axis=0),
            None if self.hess is None else self.hess.sum(axis=0),
        )

    # ---------- arithmetic ----------
    def __add__(self, other: Union["Dual2", Number]) -> "Dual2":
        o = Dual2._coerce(other)
        return Dual2(self.val + o.val, _add(self.grad, o.grad), _add(self.hess, o.hess))

    __radd__ = __add__

    def __neg__(self) -> "Dual2":
        return Dual2(
            -self.val,
            None if self.grad is None else -self.grad,
            None if self.hess is None else -self.hess,
        )

    def __sub__(self, other: Union["Dual2", Number]) -> "Dual2":
        return self + (-Dual2._coerce(other))

    def __rsub__(self, other: Union["Dual2", Number]) -> "Dual2":
        return Dual2._coerce(other) + (-self)

    def __mul__(self, other: Union["Dual2", Number]) -> "Dual2":
        o = Dual2._coerce(other)
        val = self.val * o.val
        grad = _add(_scale(self.val, o.grad, 1), _scale(o.val, self.grad, 1))
        hess = _add(_scale(self.val, o.hess, 2), _scale(o.val, self.hess, 2))
        if self.grad is not None and o.grad is not None and (self.hess is not None or o.hess is not None):
            hess = _add(hess, _outer(self.grad, o.grad) + _outer(o.grad, self.grad))
        return Dual2(val, grad, hess)

    __rmul__ = __mul__

    def reciprocal(self) -> "Dual2":
        if np.any(self.val == 0.0):
            raise DomainError("division by zero")
        v = self.val
        return self._chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))

    def __truediv__(self, other: Union["Dual2", Number]) -> "Dual2":
        return self * Dual2._coerce(other).reciprocal()

    def __rtruediv__(self, other: Union["Dual2", Number]) -> "Dual2":
        return Dual2._coerce(other) * self.reciprocal()

    def __pow__(self, other: Union["Dual2", Number]) -> "Dual2":
        if isinstance(other, Dual2):
            if other.grad is None and other.val.ndim == 0:
                return self ** float(other.val)
            return self.power(other)
        exponent = float(other)
        if exponent.is_integer():
            return self.powi(int(exponent))
        return self.powr(exponent)

    def __rpow__(self, base: Number) -> "Dual2":
        return Dual2._coerce(base).power(self)

    def __abs__(self) -> "Dual2":
        return self.abs()

    # ---------- elementary functions ----------
    def _chain(self, f0, f1, f2) -> "Dual2":
        """Apply a scalar function with derivatives f1, f2 at self.val."""
        grad = _scale(f1, self.grad, 1)
        hess = None
        if self.hess is not None:
            hess = _scale(f1, self.hess, 2) + _scale(f2, _outer(self.grad, self.grad), 2)
        return Dual2(f0, grad, hess)

    def powi(self, k: int) -> "Dual2":
        """Integer power, defined for every base except 0 with k < 0."""
        v = self.val
        if k < 0 and np.any(v == 0.0):
            raise DomainError(f"zero raised to the negative power {k}")
        f0 = np.power(v, float(k))
        f1 = k * np.power(v, float(k - 1)) if k != 0 else np.zeros_like(v)
        f2 = k * (k - 1) * np.power(v, float(k - 2)) if k not in (0, 1) else np.zeros_like(v)
        return self._chain(f0, f1, f2)

    def powr(self, r: float) -> "Dual2":
        """Real power; the base must be positive."""
        v = self.val
        if np.any(v <= 0.0):
            raise DomainError(f"non-integer power {r!r} of a non-positive base")
        return self._chain(np.power(v, r), r * np.power(v, r - 1.0), r * (r - 1.0) * np.power(v, r - 2.0))

    def power(self, exponent: "Dual2") -> "Dual2":
        """General power base**exponent through exp(exponent * log(base))."""
        if np.any(self.val <= 0.0):
            raise DomainError("variable power of a non-positive base")
        return (exponent * self.log()).exp()

    def exp(self) -> "Dual2":
        e = np.exp(self.val)
        return self._chain(e, e, e)

    def log(self) -> "Dual2":
        v = self.val
        if np.any(v <= 0.0):
            raise DomainError("log of a non-positive value")
        return self._chain(np.log(v), 1.0 / v, -1.0 / (v * v))

    def sin(self) -> "Dual2":
        s, c = np.sin(self.val), np.cos(self.val)
        return self._chain(s, c, -s)

    def cos(self) -> "Dual2":
        s, c = np.sin(self.val), np.cos(self.val)
        return self._chain(c, -s, -c)

    def sqrt(self) -> "Dual2":
        v = self.val
        if np.any(v < 0.0):
            raise DomainError("sqrt of a negative value")
        if self.grad is not None and np.any(v == 0.0):
            raise DomainError("sqrt is not differentiable at 0")
        root = np.sqrt(v)
        if self.grad is None:
            return Dual2(root)
        return self._chain(root, 0.5 / root, -0.25 / (root * v))

    def abs(self) -> "Dual2":
        v = self.val
        if self.grad is not None and np.any(v == 0.0):
            raise DomainError("abs is not differentiable at 0")
        return self._chain(np.abs(v), np.sign(v), np.zeros_like(v))
