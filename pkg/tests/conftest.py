import numpy as np
import pytest

from knotcover.engine import build_engine
from knotcover.scene import builtin_scene

_ENGINES = {}


@pytest.fixture(scope="session")
def engine_for():
    def get(name: str):
        if name not in _ENGINES:
            _ENGINES[name] = build_engine(builtin_scene(name))
        return _ENGINES[name]

    return get


@pytest.fixture(scope="session")
def geometric_names():
    return ["unknot", "twisted-unknot", "trefoil", "figure-eight", "solomon-seal"]


def strand_loop(curve, k: int, radius: float, sides: int = 12) -> np.ndarray:
    """A closed polygon encircling the curve at point index k."""
    p = curve.points[k]
    tang = curve.points[(k + 1) % curve.n] - curve.points[k - 1]
    tang = tang / np.linalg.norm(tang)
    ref = np.array([0.0, 0.0, 1.0]) if abs(tang[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    n1 = np.cross(tang, ref)
    n1 /= np.linalg.norm(n1)
    n2 = np.cross(tang, n1)
    ang = 2 * np.pi * np.arange(sides) / sides + 0.173
    ring = p[None, :] + radius * (np.cos(ang)[:, None] * n1 + np.sin(ang)[:, None] * n2)
    return np.vstack([ring, ring[:1]])
