#!/usr/bin/env python3
"""Regenerate the builtin scene files.

For each geometric scene this derives the Wirtinger presentation of the
view from the baked apex, squares the generators, and writes the scene
with a generator-to-cone map matching the deterministic piece order.
Run from the repo root: python tools/bake_scenes.py
"""

import json
import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from knotcover.cone import build_cone, split_cone
from knotcover.diagram import perspective_cross, wirtinger
from knotcover.groups import add_branching_relators, enumerate_cosets
from knotcover.knot import sample_parametric
from knotcover.scene import WORLD_PALETTE

PI = np.pi

# trigonometric term tables: rows of (amplitude, frequency, phase) per axis
KNOTS = {
    "unknot": {
        "terms": {
            "x": [[0.8, 1, 0.0]],
            "y": [[1.5, 1, PI / 2]],
            "z": [],
        },
        "samples": 256,
        "apex_dir": [0.0, 0.0, 1.0],
    },
    # a doubly-wound circle: (2 + 0.8 cos t)(cos 2t, sin 2t), z = 2 sin t;
    # from the baked apex it shows two crossings, hence two portals
    "twisted-unknot": {
        "terms": {
            "x": [[2.0, 2, PI / 2], [0.4, 1, PI / 2], [0.4, 3, PI / 2]],
            "y": [[2.0, 2, 0.0], [0.4, 3, 0.0], [0.4, 1, 0.0]],
            "z": [[2.0, 1, 0.0]],
        },
        "samples": 256,
        "apex_dir": [1.0, 0.0, 0.33],
    },
    "trefoil": {
        "terms": {
            "x": [[1.0, 1, 0.0], [2.0, 2, 0.0]],
            "y": [[1.0, 1, PI / 2], [-2.0, 2, PI / 2]],
            "z": [[-1.0, 3, 0.0]],
        },
        "samples": 256,
        "apex_dir": [0.0, 0.0, 1.0],
    },
    "figure-eight": {
        "terms": {
            "x": [[2.0, 3, PI / 2], [0.5, 1, PI / 2], [0.5, 5, PI / 2]],
            "y": [[2.0, 3, 0.0], [0.5, 5, 0.0], [0.5, 1, 0.0]],
            "z": [[1.0, 4, 0.0]],
        },
        "samples": 256,
        "apex_dir": [0.0, 0.0, 1.0],
    },
    "solomon-seal": {
        "terms": {
            "x": [[3.0, 2, PI / 2], [0.5, 3, PI / 2], [0.5, 7, PI / 2]],
            "y": [[3.0, 2, 0.0], [0.5, 7, 0.0], [-0.5, 3, 0.0]],
            "z": [[1.0, 5, 0.0]],
        },
        "samples": 250,
        "apex_dir": [0.0, 0.0, 1.0],
    },
}

# paper-style compact deck groups for the unknotted scenes
SIMPLE_GROUPS = {
    "unknot": None,
    "twisted-unknot": ("a", ["aa"]),
}


def bake_geometric(name: str, cfg: dict) -> dict:
    curve = sample_parametric(
        {axis: [tuple(row) for row in rows] for axis, rows in cfg["terms"].items()},
        cfg["samples"],
    )
    d = np.asarray(cfg["apex_dir"], dtype=float)
    d /= np.linalg.norm(d)
    apex = curve.centroid + 10.0 * curve.diameter * d
    pts2d, crossings = perspective_cross(curve, apex)
    presentation = wirtinger(pts2d, crossings)
    quotient = add_branching_relators(presentation, 2)
    table = enumerate_cosets(quotient)
    pieces = split_cone(build_cone(curve, apex))
    if len(pieces) != max(len(crossings), 1):
        raise RuntimeError(f"{name}: {len(pieces)} pieces vs {len(crossings)} crossings")

    if name in SIMPLE_GROUPS and SIMPLE_GROUPS[name]:
        gen, relators = SIMPLE_GROUPS[name]
        group = {"type": "presentation", "generators": [gen], "relators": relators}
        gen_to_cone = [gen] * len(pieces)
        order = 2
    else:
        group = {
            "type": "presentation",
            "generators": list(quotient.generators),
            "relators": quotient.relator_strings(),
        }
        gen_to_cone = [quotient.generators[p.arc.index] for p in pieces]
        order = table.order

    worlds = [
        {"name": n, "color": list(c)} for n, c in WORLD_PALETTE[:order]
    ]
    print(
        f"{name}: crossings={len(crossings)} pieces={len(pieces)}"
        f" order={order} gens={quotient.generators}"
    )
    return {
        "version": 1,
        "name": name,
        "knot": {"type": "parametric", "terms": cfg["terms"], "samples": cfg["samples"]},
        "apex": [round(float(v), 9) for v in apex],
        "group": group,
        "gen_to_cone": gen_to_cone,
        "worlds": worlds,
    }


def bake_hopf() -> dict:
    return {
        "version": 1,
        "name": "hopf",
        "group": {
            "type": "presentation",
            "generators": ["a", "b"],
            "relators": ["aa", "bb", "abab"],
        },
        "gen_to_cone": ["a", "b"],
        "worlds": [{"name": n, "color": list(c)} for n, c in WORLD_PALETTE[:4]],
        "group_only": True,
    }


def main() -> None:
    out_dir = pathlib.Path(__file__).resolve().parents[1] / "src" / "knotcover" / "scenes"
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, cfg in KNOTS.items():
        data = bake_geometric(name, cfg)
        (out_dir / f"{name}.json").write_text(json.dumps(data, indent=2) + "\n")
    (out_dir / "hopf.json").write_text(json.dumps(bake_hopf(), indent=2) + "\n")
    print("hopf: group-only")
    print(f"wrote scenes to {out_dir}")


if __name__ == "__main__":
    main()
