"""
Shared pytest fixtures for qkmech tests.
"""

import logging

import numpy as np
import pytest

from src.app.calculus.builtins import AnisotropicQuadratic, FreeQuadratic, Gravity
from src.app.geometry.structure import ChartDim, StructureKind, build_structure


@pytest.fixture
def temp_dir(tmp_path):
    """Create a temporary directory for test files."""
    return tmp_path


@pytest.fixture(autouse=True)
def isolated_logging(tmp_path, monkeypatch):
    """
    Send log files to a temp dir and reset the 'qkmech' logger.
    Runs automatically for every test.
    """
    monkeypatch.setattr("src.core.logger.LOGS_DIR", tmp_path / "logs")
    monkeypatch.setattr("src.core.logger.LOG_LEVEL", "")
    root = logging.getLogger("qkmech")
    root.handlers.clear()
    root.propagate = True
    yield
    for handler in root.handlers:
        handler.close()
    root.handlers.clear()
    root.propagate = True


@pytest.fixture
def dim1():
    return ChartDim(1)


@pytest.fixture
def dim2():
    return ChartDim(2)


@pytest.fixture
def rng():
    """Seeded generator so every test run sees the same numbers."""
    return np.random.default_rng(12345)


@pytest.fixture
def F1(dim1):
    return build_structure(StructureKind.F, dim1)


@pytest.fixture
def G1(dim1):
    return build_structure(StructureKind.G, dim1)


@pytest.fixture
def H1(dim1):
    return build_structure(StructureKind.H, dim1)


@pytest.fixture
def free_quadratic(dim1):
    return FreeQuadratic(dim1)


@pytest.fixture
def gravity(dim1):
    return Gravity(dim1)


@pytest.fixture
def anisotropic(dim2):
    return AnisotropicQuadratic(dim2, [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0])


@pytest.fixture
def e0():
    return np.array([1.0, 0.0, 0.0, 0.0])


@pytest.fixture
def config_file(temp_dir):
    """
    Write a run config file and return its path.

    Returns:
        Callable taking the file body
    """
    def write(body: str, name: str = "run.cfg"):
        path = temp_dir / name
        path.write_text(body)
        return path
    return write
