"""
Unit tests for the identity validation suite.
"""

import numpy as np
import pytest

from config.settings import VALIDATION_TOLERANCES
from src.app.calculus import get_builtin
from src.app.calculus.builtins import FreeQuadratic, Gravity
from src.app.calculus.fields import ExpressionField
from src.app.dsl import eval_as_field, parse
from src.app.geometry.structure import ChartDim
from src.app.services.validation import MIN_POINT_NORM, CheckResult, run_validation, sample_points
from tests.helpers.lagrangians import SMOOTH_LAGRANGIANS


@pytest.mark.unit
class TestSamplePoints:
    def test_points_stay_in_cube_and_off_origin(self, rng, dim2):
        points = sample_points(rng, dim2, 200)
        assert len(points) == 200
        for p in points:
            assert p.shape == (8,)
            assert np.all(np.abs(p) <= 1.0)
            assert np.linalg.norm(p) >= MIN_POINT_NORM

    def test_seeded(self, dim1):
        a = sample_points(np.random.default_rng(3), dim1, 5)
        b = sample_points(np.random.default_rng(3), dim1, 5)
        assert all(np.array_equal(x, y) for x, y in zip(a, b))


@pytest.mark.unit
class TestCheckResult:
    def test_record_keeps_maximum(self):
        c = CheckResult("x", 0.0, 1e-9)
        c.record(1e-12)
        c.record(1e-10)
        c.record(1e-11)
        assert c.max_violation == 1e-10
        assert c.samples == 3
        assert c.passed

    def test_fails_above_tolerance(self):
        c = CheckResult("x", 0.0, 0.0)
        c.record(1e-300)
        assert not c.passed
        assert c.to_dict()["passed"] is False


@pytest.mark.unit
class TestRunValidation:
    def test_free_quadratic_passes(self, dim1):
        report = run_validation(FreeQuadratic(dim1), points=5, seed=0)
        assert report.all_passed
        assert report.first_failure is None
        assert [c.name for c in report.checks] == list(VALIDATION_TOLERANCES)
        assert report.check("ad_vs_fd_gradient").samples == 5
        assert report.check("wedge_vs_compact").samples == 15
        assert report.check("literal_el_system").samples == 15
        assert report.check("quaternion_relations").max_violation == 0.0

    def test_gravity_passes(self, dim1):
        report = run_validation(Gravity(dim1), points=20, seed=1)
        assert report.all_passed, report.first_failure

    def test_expression_passes_for_n2(self, dim2):
        src = "0.5*(x0^2+x1^2+x2^2+x3^2+x4^2+x5^2+x6^2+x7^2) + 0.1*sin(x0*x5) + 0.05*cos(x2 - x7)"
        L = eval_as_field(parse(src, dim2), dim2, src)
        report = run_validation(L, points=5, seed=2)
        assert report.all_passed, report.first_failure

    def test_no_literal_check_above_n2(self):
        dim = ChartDim(3)
        report = run_validation(FreeQuadratic(dim), points=2, seed=0)
        assert report.check("literal_el_system").samples == 0
        assert report.all_passed

    def test_deterministic_for_seed(self, dim1):
        a = run_validation(Gravity(dim1), points=4, seed=11).to_dict()
        b = run_validation(Gravity(dim1), points=4, seed=11).to_dict()
        assert a == b

    def test_tiny_tolerance_fails(self, dim1):
        report = run_validation(Gravity(dim1), points=3, seed=0, tolerance=1e-20)
        assert not report.all_passed
        assert report.first_failure is not None
        assert all(c.tolerance == 1e-20 for c in report.checks)
        assert report.to_dict()["first_failure"] == report.first_failure.name

    def test_singular_points_are_skipped(self, dim1):
        L = ExpressionField(dim1, lambda x: 0.5 * x[0] * x[0], "degenerate")
        report = run_validation(L, points=4, seed=0)
        assert report.check("dynamics_identity").skipped == 12
        assert report.check("dynamics_identity").samples == 0
        assert report.check("energy_differential_paths").skipped == 12

    def test_domain_errors_are_skipped(self, dim1, caplog):
        L = eval_as_field(parse("0.5*(x1^2+x2^2+x3^2) + sqrt(x0)", dim1), dim1)
        with caplog.at_level("WARNING", logger="qkmech.validation"):
            report = run_validation(L, points=10, seed=4)
        skipped = report.check("ad_vs_fd_gradient").skipped
        assert skipped > 0
        assert report.check("ad_vs_fd_gradient").samples + skipped == 10
        assert "skipped" in caplog.text


def _assert_full_pass(report, points):
    assert report.all_passed, report.first_failure
    assert report.check("ad_vs_fd_hessian").samples == points
    assert report.check("wedge_vs_compact").samples == 3 * points
    assert report.check("dynamics_identity").samples == 3 * points
    assert all(c.skipped == 0 for c in report.checks)


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("name", ["free_quadratic:1", "gravity:1,9.8", "anisotropic_quadratic"])
def test_builtins_pass_at_one_hundred_points(name, n):
    dim = ChartDim(n)
    if name == "anisotropic_quadratic":
        name += ":" + ",".join(str(0.5 * (a + 1)) for a in range(dim.total))
    _assert_full_pass(run_validation(get_builtin(name, dim), points=100, seed=n), 100)


@pytest.mark.slow
@pytest.mark.parametrize("source", SMOOTH_LAGRANGIANS)
def test_expressions_pass_at_one_hundred_points(source, dim1):
    L = eval_as_field(parse(source, dim1), dim1, source)
    _assert_full_pass(run_validation(L, points=100, seed=7), 100)
