"""knotcover: order-2 branched covers of knots as walkable portal worlds.

The pipeline: a closed space curve (the branch curve) is projected to a
diagram, the Wirtinger presentation of its knot group is computed, the
quotient by squared generators is enumerated into a finite deck
transformation group, and a cut-cone surface glues the sheets.  Transport
and rendering queries answer "which world am I in" and "which world do I
see through each screen region".
"""

__version__ = "0.1.0"

from .cone import assign_generators, build_cone, choose_apex, split_cone
from .diagram import perspective_cross, project_and_cross, wirtinger
from .engine import Engine, build_engine
from .groups import (
    GroupTable,
    Presentation,
    add_branching_relators,
    enumerate_cosets,
    identify,
    parse_table,
    validate,
)
from .knot import KnotCurve, catmull_rom, sample_parametric, tube_mesh
from .regions import Camera, pole_of_inaccessibility
from .render import Frame, render, render_brute
from .scene import SceneSpec, builtin_scene, builtin_scenes, load_scene, parse_scene, serialize_scene
from .transport import WorldState, ray_crossings, transport, transport_path

__all__ = [
    "Camera",
    "Engine",
    "Frame",
    "GroupTable",
    "KnotCurve",
    "Presentation",
    "SceneSpec",
    "WorldState",
    "add_branching_relators",
    "assign_generators",
    "build_cone",
    "build_engine",
    "builtin_scene",
    "builtin_scenes",
    "catmull_rom",
    "choose_apex",
    "enumerate_cosets",
    "identify",
    "load_scene",
    "parse_scene",
    "parse_table",
    "perspective_cross",
    "pole_of_inaccessibility",
    "project_and_cross",
    "ray_crossings",
    "render",
    "render_brute",
    "sample_parametric",
    "serialize_scene",
    "split_cone",
    "transport",
    "transport_path",
    "tube_mesh",
    "validate",
    "wirtinger",
    "__version__",
]
