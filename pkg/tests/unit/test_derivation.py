"""
Unit tests for the derivation chain behind `derive`.
"""

import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.app.dsl import eval_as_field, parse
from src.app.services.derivation import derive
from src.core.errors import DomainError, SingularHessianError


@pytest.mark.unit
class TestDerive:
    def test_free_quadratic_chain(self, free_quadratic, F1, e0):
        d = derive(free_quadratic, F1, e0)
        assert d.lagrangian == "free_quadratic(m=1)"
        assert d.value == 0.5
        assert (d.kinetic, d.potential) == (0.5, 0.0)
        assert_allclose(d.velocity, [0.0, 1.0, 0.0, 0.0], atol=1e-15)
        assert_allclose(d.liouville, [-1.0, 0.0, 0.0, 0.0], atol=1e-15)
        assert d.energy == pytest.approx(-1.5)
        assert_allclose(d.energy_differential, [-2.0, 0.0, 0.0, 0.0], atol=1e-15)
        assert_allclose(d.phi, -2.0 * F1.matrix())
        assert d.residual_norm < 1e-15
        assert d.literal_deviation == 0.0
        assert len(d.residual_blocks) == 4

    def test_gravity_split(self, gravity, H1):
        d = derive(gravity, H1, [3.0, 0.0, 4.0, 0.0])
        assert d.value == pytest.approx(-36.5)
        assert d.kinetic == pytest.approx(12.5)
        assert d.potential == pytest.approx(49.0)

    def test_expression_has_no_split(self, dim1, G1):
        src = "0.5*(x0^2+x1^2+x2^2+x3^2)"
        L = eval_as_field(parse(src, dim1), dim1, src)
        d = derive(L, G1, [1.0, 2.0, 0.0, 0.0])
        assert d.kinetic is None
        data = d.to_dict()
        assert "kinetic" not in data
        assert data["lagrangian"] == f"expr[{src}]"

    def test_to_dict_is_json(self, free_quadratic, F1, e0):
        data = json.loads(json.dumps(derive(free_quadratic, F1, e0).to_dict()))
        assert data["structure"] == "F"
        assert data["xi"] == pytest.approx([0.0, 1.0, 0.0, 0.0])
        assert np.array(data["hessian"]).shape == (4, 4)
        assert data["kinetic"] == 0.5

    def test_errors_propagate(self, gravity, dim1, F1):
        with pytest.raises(DomainError):
            derive(gravity, F1, np.zeros(4))
        L = eval_as_field(parse("x0*x0", dim1), dim1)
        with pytest.raises(SingularHessianError):
            derive(L, F1, [1.0, 0.0, 0.0, 0.0])
