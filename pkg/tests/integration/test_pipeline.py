"""
Integration tests: an expression Lagrangian and its built-in twin must agree
through every layer, from the jet to the written trajectory.
"""

import csv

import numpy as np
import pytest

from src.app.calculus.builtins import FreeQuadratic, Gravity
from src.app.dsl import eval_as_field, parse
from src.app.flow import IntegratorConfig, integrate, write_trajectory_csv
from src.app.geometry.structure import ChartDim, StructureKind, build_structure
from src.app.services.derivation import derive
from src.app.services.validation import run_validation


GRAVITY_SRC = "0.5*(x0^2+x1^2+x2^2+x3^2) - 9.8*sqrt(x0^2+x1^2+x2^2+x3^2)"
FREE_SRC = "0.5*(x0^2+x1^2+x2^2+x3^2)"


def _field(source, dim):
    return eval_as_field(parse(source, dim), dim, source)


@pytest.mark.integration
class TestExpressionMatchesBuiltin:
    @pytest.mark.parametrize("kind", ["F", "G", "H"])
    def test_derivations_agree(self, dim1, kind):
        J = build_structure(StructureKind.parse(kind), dim1)
        p = np.array([3.0, 0.0, 4.0, 0.0])
        ours = derive(_field(GRAVITY_SRC, dim1), J, p)
        builtin = derive(Gravity(dim1), J, p)

        assert ours.value == pytest.approx(-36.5)
        assert ours.value == pytest.approx(builtin.value, abs=1e-12)
        np.testing.assert_allclose(ours.hessian, builtin.hessian, atol=1e-12)
        np.testing.assert_allclose(ours.velocity, builtin.velocity, atol=1e-10)
        assert ours.energy == pytest.approx(builtin.energy, abs=1e-10)

    def test_trajectories_agree(self, dim1):
        J = build_structure(StructureKind.G, dim1)
        cfg = IntegratorConfig(dt=0.01, t_end=1.0)
        x0 = np.array([1.0, 0.0, 0.0, 0.0])

        ours, _ = integrate(_field(FREE_SRC, dim1), J, x0, cfg)
        builtin, _ = integrate(FreeQuadratic(dim1), J, x0, cfg)

        np.testing.assert_allclose(ours.states, builtin.states, atol=1e-12)
        np.testing.assert_allclose(ours.energies, builtin.energies, atol=1e-12)

    def test_validation_passes_for_expression(self):
        dim = ChartDim(2)
        source = "+".join(f"{a + 1}*x{a}^2" for a in range(dim.total)) + " + 0.1*x0*x5"
        report = run_validation(_field(source, dim), points=5, seed=7)
        assert report.all_passed, report.first_failure


@pytest.mark.integration
@pytest.mark.file_ops
def test_written_trajectory_reloads_exactly(dim1, temp_dir):
    J = build_structure(StructureKind.H, dim1)
    trajectory, _ = integrate(FreeQuadratic(dim1), J, [0.0, 1.0, 0.0, 0.0], IntegratorConfig(dt=0.05, t_end=0.5))
    path = write_trajectory_csv(temp_dir / "traj.csv", trajectory, dim1)

    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == len(trajectory) == 11
    reloaded = np.array([[float(r[f"x{a}"]) for a in range(4)] for r in rows])
    np.testing.assert_array_equal(reloaded, trajectory.states)
