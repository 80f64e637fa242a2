"""
Unit tests for scalar fields, jets, the finite-difference oracle and the
built-in Lagrangian catalog.
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.app.calculus import get_all_builtin_names, get_builtin, parse_builtin_spec
from src.app.calculus.builtins import AnisotropicQuadratic, FreeQuadratic, Gravity
from src.app.calculus.dual import Dual2
from src.app.calculus.fields import DifferenceField, ExpressionField, Jet2, fd_oracle, jet
from src.app.dsl import eval_as_field, parse
from src.app.geometry.structure import ChartDim
from src.app.services.validation import sample_points
from src.core.errors import DimensionError, DomainError
from tests.helpers.lagrangians import SMOOTH_LAGRANGIANS


@pytest.mark.unit
class TestJet2:
    def test_from_raw_symmetrizes(self):
        j = Jet2.from_raw(1.0, [0.0, 0.0], [[1.0, 2.0], [4.0, 1.0]])
        assert_allclose(j.hessian, [[1.0, 3.0], [3.0, 1.0]])
        assert j.asymmetry == 2.0

    def test_from_raw_rejects_non_finite(self):
        with pytest.raises(DomainError):
            Jet2.from_raw(np.inf, [0.0], [[0.0]])
        with pytest.raises(DomainError):
            Jet2.from_raw(0.0, [np.nan], [[0.0]])

    def test_arrays_are_read_only(self):
        j = Jet2.from_raw(0.0, [1.0], [[1.0]])
        with pytest.raises(ValueError):
            j.gradient[0] = 5.0

    def test_size(self):
        assert Jet2.from_raw(0.0, np.zeros(4), np.zeros((4, 4))).size == 4


@pytest.mark.unit
class TestScalarField:
    def test_jet_of_free_quadratic(self, dim1, e0):
        L = FreeQuadratic(dim1, 2.0)
        j = jet(L, e0)
        assert j.value == 1.0
        assert_allclose(j.gradient, [2.0, 0.0, 0.0, 0.0])
        assert_allclose(j.hessian, 2.0 * np.eye(4))

    def test_value_matches_jet_value(self, dim2, anisotropic, rng):
        p = rng.standard_normal(8)
        assert anisotropic.value(p) == pytest.approx(anisotropic.jet(p).value)

    def test_wrong_length_point(self, free_quadratic):
        with pytest.raises(DimensionError):
            free_quadratic.jet([1.0, 0.0])

    def test_non_finite_point(self, free_quadratic):
        with pytest.raises(DomainError):
            free_quadratic.jet([np.nan, 0.0, 0.0, 0.0])

    def test_vector_valued_expression_is_rejected(self, dim1):
        field = ExpressionField(dim1, lambda x: x, "vector")
        with pytest.raises(DimensionError, match="scalar"):
            field.value([1.0, 0.0, 0.0, 0.0])

    def test_overflow_is_a_domain_error(self, dim1):
        field = ExpressionField(dim1, lambda x: x[0].exp(), "exp")
        with pytest.raises(DomainError):
            field.value([1000.0, 0.0, 0.0, 0.0])
        with pytest.raises(DomainError):
            field.jet([1000.0, 0.0, 0.0, 0.0])

    def test_constant_field_has_zero_derivatives(self, dim1):
        field = ExpressionField(dim1, lambda x: Dual2(3.0), "const")
        j = field.jet([1.0, 2.0, 3.0, 4.0])
        assert j.value == 3.0
        assert_allclose(j.gradient, np.zeros(4))
        assert_allclose(j.hessian, np.zeros((4, 4)))

    def test_difference_field_dimension_mismatch(self, dim1, dim2):
        with pytest.raises(DimensionError):
            DifferenceField(FreeQuadratic(dim1), FreeQuadratic(dim2))


@pytest.mark.unit
class TestBuiltins:
    def test_gravity_hessian_on_axis(self, gravity):
        j = gravity.jet([1.0, 0.0, 0.0, 0.0])
        assert_allclose(j.hessian, np.diag([1.0, -8.8, -8.8, -8.8]), atol=1e-12)

    def test_gravity_value(self, gravity):
        assert gravity.value([3.0, 0.0, 4.0, 0.0]) == pytest.approx(-36.5)

    def test_gravity_gradient(self, gravity):
        # grad = m x - m g x/|x|
        j = gravity.jet([3.0, 0.0, 4.0, 0.0])
        assert_allclose(j.gradient, [3.0 - 9.8 * 0.6, 0.0, 4.0 - 9.8 * 0.8, 0.0])

    def test_gravity_undefined_at_origin(self, gravity):
        with pytest.raises(DomainError, match="origin"):
            gravity.jet(np.zeros(4))

    def test_kinetic_and_potential_split(self, gravity):
        p = [3.0, 0.0, 4.0, 0.0]
        assert gravity.kinetic().value(p) == pytest.approx(12.5)
        assert gravity.potential().value(p) == pytest.approx(49.0)

    def test_anisotropic_hessian_is_diagonal(self, anisotropic, rng):
        j = anisotropic.jet(rng.standard_normal(8))
        assert_allclose(j.hessian, np.diag(np.arange(1.0, 9.0)))

    @pytest.mark.parametrize("factory", [
        lambda d: FreeQuadratic(d, 0.0),
        lambda d: Gravity(d, -1.0),
        lambda d: Gravity(d, 1.0, -9.8),
        lambda d: AnisotropicQuadratic(d, [1.0, 2.0]),
        lambda d: AnisotropicQuadratic(d, [1.0, 0.0, 1.0, 1.0]),
    ])
    def test_invalid_parameters(self, dim1, factory):
        with pytest.raises(ValueError):
            factory(dim1)

    def test_describe(self, dim1):
        assert FreeQuadratic(dim1, 2.0).describe() == "free_quadratic(m=2)"
        assert Gravity(dim1).describe() == "gravity(m=1, g=9.8)"
        assert AnisotropicQuadratic(dim1, [1, 2, 3, 4]).describe() == "anisotropic_quadratic(w=1,2,3,4)"


@pytest.mark.unit
class TestRegistry:
    def test_parse_spec(self):
        assert parse_builtin_spec("gravity:1, 9.8") == ("gravity", [1.0, 9.8])
        assert parse_builtin_spec("free_quadratic") == ("free_quadratic", [])

    def test_parse_spec_bad_number(self):
        with pytest.raises(ValueError, match="not a number"):
            parse_builtin_spec("gravity:a")

    def test_get_builtin(self, dim1):
        L = get_builtin("gravity:2,1", dim1)
        assert isinstance(L, Gravity)
        assert (L.m, L.g) == (2.0, 1.0)

    def test_defaults_apply(self, dim1):
        L = get_builtin("free_quadratic", dim1)
        assert L.m == 1.0

    def test_unknown_name(self, dim1):
        with pytest.raises(KeyError, match="Unknown built-in"):
            get_builtin("harmonic:1", dim1)

    def test_too_many_parameters(self, dim1):
        with pytest.raises(ValueError):
            get_builtin("free_quadratic:1,2", dim1)

    def test_all_names(self):
        assert get_all_builtin_names() == ["free_quadratic", "gravity", "anisotropic_quadratic"]


@pytest.mark.unit
class TestFdOracle:
    def test_matches_ad_for_gravity(self, gravity):
        p = np.array([3.0, 0.0, 4.0, 0.0])
        exact, fd = gravity.jet(p), fd_oracle(gravity, p, 1e-4)
        assert_allclose(fd.gradient, exact.gradient, atol=1e-7)
        assert_allclose(fd.hessian, exact.hessian, atol=1e-5)

    def test_matches_ad_for_coupled_field(self, dim1):
        field = ExpressionField(dim1, lambda x: (x[0] * x[1]).sin() + x[2] * x[3] * x[3], "coupled")
        p = np.array([0.4, -0.7, 1.1, 0.5])
        exact, fd = field.jet(p), fd_oracle(field, p, 1e-4)
        assert_allclose(fd.gradient, exact.gradient, atol=1e-7)
        assert_allclose(fd.hessian, exact.hessian, atol=1e-5)

    @pytest.mark.parametrize("step", [0.0, -1e-4])
    def test_step_must_be_positive(self, free_quadratic, e0, step):
        with pytest.raises(ValueError):
            fd_oracle(free_quadratic, e0, step)

    def test_stencil_leaving_domain(self, gravity):
        with pytest.raises(DomainError):
            fd_oracle(gravity, [1e-10, 0.0, 0.0, 0.0], 1e-4)


def _relative(diff, reference):
    return float(np.max(np.abs(diff))) / (1.0 + float(np.max(np.abs(reference))))


def _assert_ad_matches_fd(field, seed, count=100):
    for p in sample_points(np.random.default_rng(seed), field.dim, count):
        exact, fd = field.jet(p), fd_oracle(field, p, 1e-4)
        assert _relative(exact.gradient - fd.gradient, exact.gradient) < 1e-6, p
        assert _relative(exact.hessian - fd.hessian, exact.hessian) < 1e-6, p


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("name", ["free_quadratic:2", "gravity:1,9.8", "anisotropic_quadratic"])
def test_ad_matches_fd_for_builtins(name, n):
    dim = ChartDim(n)
    if name == "anisotropic_quadratic":
        name += ":" + ",".join(str(a + 1) for a in range(dim.total))
    _assert_ad_matches_fd(get_builtin(name, dim), seed=n)


@pytest.mark.slow
@pytest.mark.parametrize("source", SMOOTH_LAGRANGIANS)
def test_ad_matches_fd_for_expressions(source, dim1):
    _assert_ad_matches_fd(eval_as_field(parse(source, dim1), dim1, source), seed=len(source))
