"""Command line interface; thin argument parsing over the engine library.

Exit codes: 0 ok, 2 scene/input error, 3 geometry error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .cone import ConeError
from .diagram import NonGenericProjection, project_and_cross, wirtinger
from .engine import build_curve, build_engine
from .groups import GroupError, add_branching_relators, enumerate_cosets, identify, validate, word_str
from .knot import KnotError
from .regions import Camera
from .render import RenderError, render, render_brute, save_frame
from .scene import SceneError, builtin_scenes, load_scene
from .transport import GrazingHit, WorldState, transport_path

SCENE_HELP = "builtin scene name or path to a scene file"


def _vec(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}")
    return np.array([float(p) for p in parts])


def _size(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WxH, got {text!r}")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="knotcover",
        description="Branched covers of knots as walkable portal worlds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scenes", help="list the builtin scenes")

    p = sub.add_parser("validate", help="parse and fully validate a scene")
    p.add_argument("scene", help=SCENE_HELP)

    p = sub.add_parser("knot", help="sample the branch curve")
    p.add_argument("scene", help=SCENE_HELP)
    p.add_argument("--dump-curve", metavar="OUT.csv", help="write one x,y,z row per point")

    p = sub.add_parser("wirtinger", help="knot group presentation from the diagram")
    p.add_argument("scene", help=SCENE_HELP)
    p.add_argument("--direction", type=_vec, default=None, help="projection direction x,y,z (default 0,0,1)")
    p.add_argument("--quotient", action="store_true", help="also print the squared-generator quotient")

    p = sub.add_parser("group", help="deck group order, identification, and table")
    p.add_argument("scene", help=SCENE_HELP)

    p = sub.add_parser("cone", help="cut-cone pieces and generator labels")
    p.add_argument("scene", help=SCENE_HELP)
    p.add_argument("--dump", metavar="OUT.obj", help="write pieces as named obj groups")

    p = sub.add_parser("transport", help="transport a world along a path")
    p.add_argument("scene", help=SCENE_HELP)
    p.add_argument("--path", required=True, metavar="PATH.csv", help="x,y,z per line")
    p.add_argument("--start", default="e", help="starting world element name (default e)")

    p = sub.add_parser("render", help="render a frame to an image")
    p.add_argument("scene", help=SCENE_HELP)
    p.add_argument("--pos", type=_vec, required=True, help="camera position x,y,z")
    p.add_argument("--look", type=_vec, required=True, help="look-at point x,y,z")
    p.add_argument("--world", default="e", help="current world element name")
    p.add_argument("--size", type=_size, default=(640, 480), help="WxH (default 640x480)")
    p.add_argument("--fov", type=float, default=70.0, help="vertical fov degrees")
    p.add_argument("-o", "--out", required=True, help="output image (.ppm, .png with Pillow)")
    p.add_argument("--brute", action="store_true", help="per-pixel oracle path instead of regions")

    p = sub.add_parser("serve", help="run the HTTP engine service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except (SceneError, GroupError, KnotError, FileNotFoundError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (ConeError, NonGenericProjection, GrazingHit, RenderError) as err:
        print(f"geometry error: {err}", file=sys.stderr)
        return 3


def _dispatch(args) -> int:
    if args.command == "scenes":
        for spec in builtin_scenes():
            kind = "group only" if spec.group_only else "geometric"
            print(f"{spec.name:16s} {len(spec.worlds):3d} worlds  {kind}")
        return 0

    if args.command == "validate":
        spec = load_scene(args.scene)
        engine = build_engine(spec)
        pieces = f", {len(engine.segments)} cone pieces" if engine.segments else ""
        print(
            f"ok: {spec.name}: group order {engine.table.order}"
            f" ({identify(engine.table)}), {len(spec.worlds)} worlds{pieces}"
        )
        return 0

    if args.command == "knot":
        spec = load_scene(args.scene)
        curve = build_curve(spec)
        print(f"{spec.name}: {curve.n} points, diameter {curve.diameter:.4f}")
        if args.dump_curve:
            with open(args.dump_curve, "w") as fh:
                for p in curve.points:
                    fh.write(f"{p[0]:.9g},{p[1]:.9g},{p[2]:.9g}\n")
            print(f"wrote {curve.n} points to {args.dump_curve}")
        return 0

    if args.command == "wirtinger":
        spec = load_scene(args.scene)
        curve = build_curve(spec)
        direction = args.direction if args.direction is not None else np.array([0.0, 0.0, 1.0])
        pts2d, crossings = project_and_cross(curve, direction)
        pres = wirtinger(pts2d, crossings)
        print(f"{len(crossings)} crossings, {len(pres.generators)} generators")
        print("generators:", " ".join(pres.generators))
        for rel in pres.relators:
            print("relator:", word_str(rel, pres.generators))
        if args.quotient:
            table = enumerate_cosets(add_branching_relators(pres, 2))
            print(f"order-2 branching quotient: order {table.order} ({identify(table)})")
        return 0

    if args.command == "group":
        spec = load_scene(args.scene)
        engine = build_engine(spec)
        table = engine.table
        problems = validate(table)
        print(f"order {table.order}  identification {identify(table)}")
        if problems:
            for pr in problems:
                print("violation:", pr)
        print(table.grid())
        return 0

    if args.command == "cone":
        spec = load_scene(args.scene)
        engine = build_engine(spec)
        apex = engine.apex
        print(f"apex: {apex[0]:.4f} {apex[1]:.4f} {apex[2]:.4f}")
        print(f"{len(engine.segments)} cone pieces")
        for seg in engine.segments:
            arc = seg.piece.arc
            print(
                f"piece {seg.id}: generator {seg.generator},"
                f" {len(seg.piece.triangles)} triangles,"
                f" curve params [{arc.start:.2f}, {arc.end:.2f})"
            )
        if args.dump:
            _dump_obj(engine, args.dump)
            print(f"wrote {args.dump}")
        return 0

    if args.command == "transport":
        spec = load_scene(args.scene)
        engine = build_engine(spec)
        if engine.surface is None:
            raise SceneError(f"scene {spec.name!r} is group-only")
        path = np.loadtxt(args.path, delimiter=",", ndmin=2)
        if path.shape[1] != 3:
            raise SceneError(f"path file must have x,y,z columns, got {path.shape[1]}")
        start = WorldState(engine.element_index(args.start))
        final, events = transport_path(start, path, engine.surface)
        for ev in events:
            direction = "front" if ev.sign > 0 else "back"
            print(
                f"t={ev.t:8.4f} piece {ev.segment} {direction}"
                f" applies {engine.table.names[ev.applied]}"
            )
        print(f"final world: {engine.table.names[final.element]}")
        return 0

    if args.command == "render":
        spec = load_scene(args.scene)
        engine = build_engine(spec)
        w, h = args.size
        camera = Camera(
            position=args.pos,
            forward=args.look - args.pos,
            up=np.array([0.0, 0.0, 1.0])
            if abs(np.dot(_unit(args.look - args.pos), [0, 0, 1])) < 0.999
            else np.array([0.0, 1.0, 0.0]),
            vfov=np.radians(args.fov),
            width=w,
            height=h,
        )
        world = WorldState(engine.element_index(args.world))
        frame = (render_brute if args.brute else render)(engine, camera, world)
        save_frame(frame, args.out)
        print(f"wrote {args.out} ({w}x{h}, world {args.world})")
        return 0

    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
        return 0

    raise AssertionError(f"unhandled command {args.command}")


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _dump_obj(engine, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(f"# cut-cone pieces for scene {engine.spec.name}\n")
        offset = 1
        for seg in engine.segments:
            piece = seg.piece
            fh.write(f"g piece_{seg.id}\n# generator {seg.generator}\n")
            used = sorted(set(piece.triangles.ravel().tolist()))
            remap = {v: k for k, v in enumerate(used)}
            for v in used:
                x, y, z = piece.vertices[v]
                fh.write(f"v {x:.9g} {y:.9g} {z:.9g}\n")
            for a, b, c in piece.triangles:
                fh.write(f"f {remap[a]+offset} {remap[b]+offset} {remap[c]+offset}\n")
            offset += len(used)


if __name__ == "__main__":
    sys.exit(main())
