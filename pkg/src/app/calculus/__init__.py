"""
Built-in Lagrangian registry.
Maps catalog names to their implementation classes.
"""

from typing import List, Tuple

from src.app.calculus.builtins import BuiltinLagrangian
from src.app.geometry.structure import ChartDim


# Builtin registry: name -> module path + class name
# Lazily imported like the rest of the catalog lookups
_BUILTIN_REGISTRY = {
    "free_quadratic": ("src.app.calculus.builtins", "FreeQuadratic"),
    "gravity": ("src.app.calculus.builtins", "Gravity"),
    "anisotropic_quadratic": ("src.app.calculus.builtins", "AnisotropicQuadratic"),
}


def parse_builtin_spec(spec: str) -> Tuple[str, List[float]]:
    """
    Split a "name:p1,p2,..." string.

    Raises:
        ValueError: If a parameter is not a number.
    """
    name, _, params = spec.strip().partition(":")
    values = []
    for item in params.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            values.append(float(item))
        except ValueError:
            raise ValueError(f"built-in parameter is not a number: {item!r}") from None
    return name.strip(), values


def get_builtin(spec: str, dim: ChartDim) -> BuiltinLagrangian:
    """
    Get a built-in Lagrangian from a "name:params" string.

    Args:
        spec: e.g. "free_quadratic:1", "gravity:1,9.8", "anisotropic_quadratic:1,2,3,4".
        dim: Chart dimension.

    Returns:
        BuiltinLagrangian instance.

    Raises:
        KeyError: If the name is not registered.
        ValueError: If the parameters are invalid.
    """
    name, params = parse_builtin_spec(spec)
    if name not in _BUILTIN_REGISTRY:
        raise KeyError(f"Unknown built-in Lagrangian: {name}")

    module_path, class_name = _BUILTIN_REGISTRY[name]
    import importlib
    module = importlib.import_module(module_path)
    cls = getattr(module, class_name)
    return cls.from_params(dim, params)


def get_all_builtin_names() -> list:
    """Get all registered built-in names."""
    return list(_BUILTIN_REGISTRY.keys())
