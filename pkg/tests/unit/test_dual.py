"""
Unit tests for the second-order AD number.
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.app.calculus.dual import Dual2
from src.core.errors import DomainError


def _point(*coords):
    return Dual2.variables(list(coords))


@pytest.mark.unit
class TestSeeding:
    def test_variables_have_identity_gradient(self):
        x = _point(1.0, 2.0, 3.0)
        assert x.order == 2
        assert_allclose(x.grad, np.eye(3))
        assert_allclose(x.hess, np.zeros((3, 3, 3)))

    def test_order_zero_tracks_value_only(self):
        x = Dual2.variables([1.0, 2.0], order=0)
        assert x.order == 0
        assert x.grad is None

    def test_order_one(self):
        assert Dual2.variables([1.0], order=1).order == 1

    def test_constant(self):
        c = Dual2(4.0)
        assert c.order == 0
        assert float(c.val) == 4.0

    def test_indexing_picks_one_coordinate(self):
        x = _point(1.0, 2.0)
        y = x[1]
        assert float(y.val) == 2.0
        assert_allclose(y.grad, [0.0, 1.0])


@pytest.mark.unit
class TestArithmetic:
    def test_product_rule(self):
        x = _point(2.0, 3.0)
        f = x[0] * x[1]
        assert float(f.val) == 6.0
        assert_allclose(f.grad, [3.0, 2.0])
        assert_allclose(f.hess, [[0.0, 1.0], [1.0, 0.0]])

    def test_square(self):
        x = _point(2.0, 3.0)
        f = x[0] * x[0]
        assert_allclose(f.grad, [4.0, 0.0])
        assert_allclose(f.hess, [[2.0, 0.0], [0.0, 0.0]])

    def test_mixed_with_plain_numbers(self):
        x = _point(2.0)
        f = 3.0 * x[0] + 1.0 - x[0] / 2.0
        assert float(f.val) == pytest.approx(6.0)
        assert_allclose(f.grad, [2.5])

    def test_rsub_and_rtruediv(self):
        x = _point(2.0)
        f = 1.0 - x[0]
        g = 1.0 / x[0]
        assert float(f.val) == -1.0
        assert_allclose(g.grad, [-0.25])
        assert_allclose(g.hess, [[0.25]])

    def test_sum_over_vector(self):
        x = _point(1.0, 2.0, 3.0)
        f = (x * x).sum()
        assert float(f.val) == 14.0
        assert_allclose(f.grad, [2.0, 4.0, 6.0])
        assert_allclose(f.hess, 2.0 * np.eye(3))

    def test_quotient_matches_closed_form(self):
        # f = x / y
        x = _point(3.0, 2.0)
        f = x[0] / x[1]
        assert_allclose(f.grad, [0.5, -0.75])
        assert_allclose(f.hess, [[0.0, -0.25], [-0.25, 0.75]])

    def test_division_by_zero(self):
        x = _point(0.0)
        with pytest.raises(DomainError, match="division by zero"):
            _ = 1.0 / x[0]


@pytest.mark.unit
class TestPowers:
    def test_integer_power(self):
        x = _point(2.0)
        f = x[0] ** 3
        assert float(f.val) == 8.0
        assert_allclose(f.grad, [12.0])
        assert_allclose(f.hess, [[12.0]])

    def test_integer_power_of_negative_base(self):
        x = _point(-2.0)
        f = x[0] ** 2
        assert float(f.val) == 4.0
        assert_allclose(f.grad, [-4.0])

    def test_zero_to_negative_power(self):
        with pytest.raises(DomainError):
            _point(0.0)[0].powi(-1)

    def test_real_power(self):
        x = _point(4.0)
        f = x[0] ** 0.5
        assert float(f.val) == pytest.approx(2.0)
        assert_allclose(f.grad, [0.25])
        assert_allclose(f.hess, [[-1.0 / 32.0]])

    def test_real_power_of_negative_base(self):
        with pytest.raises(DomainError):
            _point(-1.0)[0].powr(0.5)

    def test_variable_exponent(self):
        # f = x^y at (2, 3): df/dx = y x^(y-1), df/dy = x^y ln x
        x = _point(2.0, 3.0)
        f = x[0] ** x[1]
        assert float(f.val) == pytest.approx(8.0)
        assert_allclose(f.grad, [12.0, 8.0 * np.log(2.0)])

    def test_constant_base_rpow(self):
        x = _point(1.0)
        f = 2.0 ** x[0]
        assert float(f.val) == pytest.approx(2.0)
        assert_allclose(f.grad, [2.0 * np.log(2.0)])


@pytest.mark.unit
class TestElementaryFunctions:
    def test_sin_cos(self):
        x = _point(0.3)
        s, c = x[0].sin(), x[0].cos()
        assert_allclose(s.grad, [np.cos(0.3)])
        assert_allclose(s.hess, [[-np.sin(0.3)]])
        assert_allclose(c.grad, [-np.sin(0.3)])
        assert_allclose(c.hess, [[-np.cos(0.3)]])

    def test_exp_log_round_trip(self):
        x = _point(1.7)
        f = x[0].exp().log()
        assert float(f.val) == pytest.approx(1.7)
        assert_allclose(f.grad, [1.0])
        assert_allclose(f.hess, [[0.0]], atol=1e-14)

    def test_log_of_non_positive(self):
        with pytest.raises(DomainError):
            _point(0.0)[0].log()

    def test_sqrt(self):
        x = _point(9.0)
        f = x[0].sqrt()
        assert float(f.val) == 3.0
        assert_allclose(f.grad, [1.0 / 6.0])
        assert_allclose(f.hess, [[-1.0 / 108.0]])

    def test_sqrt_of_zero_is_not_differentiable(self):
        with pytest.raises(DomainError, match="not differentiable"):
            _point(0.0)[0].sqrt()

    def test_sqrt_of_zero_constant_is_fine(self):
        assert float(Dual2(0.0).sqrt().val) == 0.0

    def test_sqrt_of_negative(self):
        with pytest.raises(DomainError):
            _point(-1.0)[0].sqrt()

    def test_abs(self):
        f = abs(_point(-2.0)[0])
        assert float(f.val) == 2.0
        assert_allclose(f.grad, [-1.0])

    def test_abs_at_zero(self):
        with pytest.raises(DomainError):
            abs(_point(0.0)[0])

    def test_chain_through_composition(self):
        # f = sin(x*y) at (1, 2)
        x = _point(1.0, 2.0)
        f = (x[0] * x[1]).sin()
        c, s = np.cos(2.0), np.sin(2.0)
        assert_allclose(f.grad, [2.0 * c, 1.0 * c])
        expected = np.array([
            [-4.0 * s, c - 2.0 * s],
            [c - 2.0 * s, -1.0 * s],
        ])
        assert_allclose(f.hess, expected)
