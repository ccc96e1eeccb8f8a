#!/usr/bin/env python3
"""Precompute the viewer's scripted trefoil walk with the primary CLI.

The walk is a fixed step script (rise three steps, then walk forward ten).
For every prefix of the walk the expected world comes from
``knotcover transport trefoil --path <prefix.csv> --start e``, so the
viewer test compares the live protocol against the CLI as the oracle.
Run from the repo root: python tools/gen_viewer_fixture.py
"""

import json
import pathlib
import subprocess
import sys
import tempfile

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from knotcover.engine import build_engine
from knotcover.scene import builtin_scene

STEPS = [{"move": [0, 0, 1]}] * 3 + [{"move": [1, 0, 0]}] * 10


def main() -> None:
    engine = build_engine(builtin_scene("trefoil"))
    pose = engine.default_pose()
    step = engine.step_size(1.0)

    # yaw and pitch stay zero, so forward is exactly +x and up is +z
    positions = [np.array(pose.position, dtype=float)]
    for s in STEPS:
        f, r, u = s["move"]
        delta = np.array([f, r, 0.0]) + np.array([0.0, 0.0, u])
        positions.append(positions[-1] + delta * step)

    worlds = [transport_world(positions[: k + 1]) for k in range(1, len(positions))]
    start = transport_world(positions[:1] * 2)  # zero-length walk: start world

    name_of = {engine.table.names[i]: engine.spec.worlds[i][0] for i in range(engine.table.order)}
    fixture = {
        "scene": "trefoil",
        "start": {"element": start, "world": name_of[start]},
        "steps": [
            {"move": s["move"], "look": {"yaw": 0.0, "pitch": 0.0}, "dt": 1.0}
            for s in STEPS
        ],
        "expected": [{"element": w, "world": name_of[w]} for w in worlds],
    }
    distinct = {w["world"] for w in fixture["expected"]} | {fixture["start"]["world"]}
    if len(distinct) < 3:
        raise SystemExit(f"walk only visits {distinct}; adjust the script")

    out = pathlib.Path(__file__).resolve().parents[1] / "frontend" / "fixtures"
    out.mkdir(parents=True, exist_ok=True)
    (out / "trefoil_walk.json").write_text(json.dumps(fixture, indent=2) + "\n")
    print(f"walk visits {sorted(distinct)}; wrote {out / 'trefoil_walk.json'}")


def transport_world(waypoints) -> str:
    with tempfile.NamedTemporaryFile("w", suffix=".csv", delete=False) as fh:
        for p in waypoints:
            fh.write(f"{float(p[0])!r},{float(p[1])!r},{float(p[2])!r}\n")
        path = fh.name
    try:
        res = subprocess.run(
            [sys.executable, "-m", "knotcover.cli", "transport", "trefoil",
             "--path", path, "--start", "e"],
            capture_output=True,
            text=True,
            check=True,
        )
    finally:
        pathlib.Path(path).unlink()
    for line in res.stdout.splitlines():
        if line.startswith("final world:"):
            return line.split(":")[1].strip()
    raise RuntimeError(f"no final world in CLI output:\n{res.stdout}\n{res.stderr}")


if __name__ == "__main__":
    main()
