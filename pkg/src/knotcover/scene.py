"""Scene descriptions: the knot, the deck group, the generator-to-cone map.

Scene files are JSON with an explicit ``version`` field::

    {
      "version": 1,
      "name": "trefoil",
      "knot": {"type": "parametric", "terms": {"x": [[amp, freq, phase], ...],
               "y": [...], "z": [...]}, "samples": 256},
      "apex": [x, y, z],                  # optional apex hint
      "scale": 1.0,                       # optional global scale
      "group": {"type": "presentation", "generators": ["a"], "relators": ["aa"]},
      "gen_to_cone": ["a"],
      "worlds": [{"name": "ice", "color": [198, 226, 255]}, ...],
      "group_only": false
    }

Knot sources: ``parametric`` (trigonometric term table, evaluated as
sum(amp*sin(freq*t + phase)) per coordinate), ``points`` (closed control
polygon interpolated by a centripetal Catmull-Rom spline; ``samples`` is
per span), or ``builtin`` (named example, expanded at parse time).
Groups: a presentation to be enumerated, or an explicit multiplication
table given as rows of space-separated element names (rows are the left
factor; the first row doubles as the element order).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .groups import GroupError, Presentation, parse_table, validate

SCENE_VERSION = 1

BUILTIN_ORDER = (
    "unknot",
    "twisted-unknot",
    "trefoil",
    "figure-eight",
    "solomon-seal",
    "hopf",
)

WORLD_PALETTE = (
    ("ice", (198, 226, 255)),
    ("forest", (34, 120, 60)),
    ("desert", (222, 184, 120)),
    ("ocean", (20, 90, 160)),
    ("ember", (200, 60, 30)),
    ("violet", (130, 80, 180)),
    ("slate", (90, 100, 110)),
    ("amber", (240, 180, 40)),
    ("rose", (230, 130, 160)),
    ("mint", (120, 220, 180)),
)


class SceneError(Exception):
    pass


Terms = dict[str, tuple[tuple[float, int, float], ...]]


@dataclass(frozen=True)
class KnotSource:
    kind: str                                   # "parametric" | "points"
    terms: tuple[tuple[str, tuple[tuple[float, int, float], ...]], ...] | None = None
    points: tuple[tuple[float, float, float], ...] | None = None

    def term_dict(self) -> dict:
        return {axis: [list(row) for row in rows] for axis, rows in (self.terms or ())}


@dataclass(frozen=True)
class GroupSource:
    kind: str                                   # "presentation" | "table"
    generators: tuple[str, ...] = ()
    relators: tuple[str, ...] = ()
    table_rows: tuple[str, ...] = ()

    def presentation(self) -> Presentation:
        if self.kind != "presentation":
            raise SceneError("group source is not a presentation")
        return Presentation.from_strings(list(self.generators), list(self.relators))

    def declared_names(self) -> tuple[str, ...]:
        if self.kind == "presentation":
            return self.generators
        return tuple(self.table_rows[0].split()) if self.table_rows else ()


@dataclass(frozen=True)
class SceneSpec:
    name: str
    knot: KnotSource | None
    sample_count: int
    apex_hint: tuple[float, float, float] | None
    scale: float
    group: GroupSource
    gen_to_cone: tuple[str, ...]
    worlds: tuple[tuple[str, tuple[int, int, int]], ...]
    group_only: bool = False


def parse_scene(text: str) -> SceneSpec:
    """Parse and validate a scene file; raises SceneError with context."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise SceneError(
            f"syntax error at line {err.lineno} column {err.colno}: {err.msg}"
        ) from None
    return scene_from_dict(data)


def scene_from_dict(data: dict) -> SceneSpec:
    if not isinstance(data, dict):
        raise SceneError("scene must be a JSON object")
    if data.get("version") != SCENE_VERSION:
        raise SceneError(f"unsupported scene version {data.get('version')!r}")
    name = data.get("name")
    if not isinstance(name, str) or not name:
        raise SceneError("scene needs a nonempty name")
    group_only = bool(data.get("group_only", False))

    knot, samples = _parse_knot(data.get("knot"), group_only)
    apex = data.get("apex")
    if apex is not None:
        if not (isinstance(apex, list) and len(apex) == 3):
            raise SceneError("apex must be [x, y, z]")
        apex = tuple(float(v) for v in apex)
    scale = float(data.get("scale", 1.0))
    if scale <= 0:
        raise SceneError("scale must be positive")

    group = _parse_group(data.get("group"))
    gen_to_cone = data.get("gen_to_cone")
    if not isinstance(gen_to_cone, list) or not all(isinstance(g, str) for g in gen_to_cone):
        raise SceneError("gen_to_cone must be a list of generator names")
    declared = group.declared_names()
    for g in gen_to_cone:
        if g not in declared:
            raise SceneError(f"gen_to_cone references {g!r}, not declared by the group")

    worlds_raw = data.get("worlds")
    if not isinstance(worlds_raw, list) or not worlds_raw:
        raise SceneError("worlds must be a nonempty list")
    worlds = []
    for wr in worlds_raw:
        if not (isinstance(wr, dict) and isinstance(wr.get("name"), str)):
            raise SceneError("each world needs a name and a color")
        color = wr.get("color")
        if not (isinstance(color, list) and len(color) == 3):
            raise SceneError(f"world {wr.get('name')!r} needs an [r, g, b] color")
        c = tuple(int(v) for v in color)
        if not all(0 <= v <= 255 for v in c):
            raise SceneError(f"world {wr['name']!r} color out of range")
        worlds.append((wr["name"], c))
    if len({w[0] for w in worlds}) != len(worlds):
        raise SceneError("duplicate world names")

    if group.kind == "table":
        table = parse_table("\n".join(group.table_rows))
        problems = validate(table)
        if problems:
            raise SceneError("invalid group table: " + "; ".join(problems[:4]))
        if len(worlds) != table.order:
            raise SceneError(
                f"{len(worlds)} worlds for a group of order {table.order}"
            )

    return SceneSpec(
        name=name,
        knot=knot,
        sample_count=samples,
        apex_hint=apex,
        scale=scale,
        group=group,
        gen_to_cone=tuple(gen_to_cone),
        worlds=tuple(worlds),
        group_only=group_only,
    )


def _parse_knot(raw, group_only: bool):
    if raw is None:
        if not group_only:
            raise SceneError("geometric scene needs a knot")
        return None, 0
    if not isinstance(raw, dict):
        raise SceneError("knot must be an object")
    kind = raw.get("type")
    samples = raw.get("samples", 256)
    if not isinstance(samples, int) or samples < 16:
        raise SceneError(f"sample count must be an integer >= 16, got {samples!r}")
    if kind == "builtin":
        name = raw.get("name")
        builtin = {s.name: s for s in builtin_scenes()}.get(name)
        if builtin is None or builtin.knot is None:
            raise SceneError(f"unknown builtin knot {name!r}")
        return builtin.knot, samples if "samples" in raw else builtin.sample_count
    if kind == "parametric":
        terms_raw = raw.get("terms")
        if not isinstance(terms_raw, dict):
            raise SceneError("parametric knot needs a terms table")
        terms = []
        nonempty = 0
        for axis in "xyz":
            rows = terms_raw.get(axis, [])
            parsed = []
            for row in rows:
                if not (isinstance(row, list) and len(row) == 3):
                    raise SceneError(f"term rows are [amplitude, frequency, phase]; bad row in {axis}")
                amp, freq, phase = float(row[0]), row[1], float(row[2])
                if freq != int(freq):
                    raise SceneError(f"non-integer frequency {freq} in {axis} (curve would not close)")
                parsed.append((amp, int(freq), phase))
            nonempty += len(parsed)
            terms.append((axis, tuple(parsed)))
        if nonempty == 0:
            raise SceneError("empty knot: no trigonometric terms")
        return KnotSource(kind="parametric", terms=tuple(terms)), samples
    if kind == "points":
        pts = raw.get("points")
        if not isinstance(pts, list) or len(pts) == 0:
            raise SceneError("empty knot: no control points")
        if len(pts) < 4:
            raise SceneError(f"need at least 4 control points, got {len(pts)}")
        points = []
        for p in pts:
            if not (isinstance(p, list) and len(p) == 3):
                raise SceneError("control points are [x, y, z]")
            points.append(tuple(float(v) for v in p))
        return KnotSource(kind="points", points=tuple(points)), samples
    raise SceneError(f"unknown knot type {kind!r}")


def _parse_group(raw) -> GroupSource:
    if not isinstance(raw, dict):
        raise SceneError("scene needs a group")
    kind = raw.get("type")
    if kind == "presentation":
        gens = raw.get("generators")
        rels = raw.get("relators", [])
        if not isinstance(gens, list) or not gens or not all(isinstance(g, str) for g in gens):
            raise SceneError("presentation needs a nonempty generator list")
        if not isinstance(rels, list) or not all(isinstance(r, str) for r in rels):
            raise SceneError("relators must be words like 'abA'")
        src = GroupSource(kind="presentation", generators=tuple(gens), relators=tuple(rels))
        try:
            src.presentation()
        except GroupError as err:
            raise SceneError(f"bad presentation: {err}") from None
        return src
    if kind == "table":
        rows = raw.get("rows")
        if not isinstance(rows, list) or not rows or not all(isinstance(r, str) for r in rows):
            raise SceneError("table group needs rows of space-separated names")
        try:
            parse_table("\n".join(rows))
        except GroupError as err:
            raise SceneError(f"bad group table: {err}") from None
        return GroupSource(kind="table", table_rows=tuple(rows))
    raise SceneError(f"unknown group type {kind!r}")


def scene_to_dict(spec: SceneSpec) -> dict:
    out: dict = {"version": SCENE_VERSION, "name": spec.name}
    if spec.knot is not None:
        knot: dict = {"type": spec.knot.kind}
        if spec.knot.kind == "parametric":
            knot["terms"] = spec.knot.term_dict()
        else:
            knot["points"] = [list(p) for p in spec.knot.points]
        knot["samples"] = spec.sample_count
        out["knot"] = knot
    if spec.apex_hint is not None:
        out["apex"] = list(spec.apex_hint)
    if spec.scale != 1.0:
        out["scale"] = spec.scale
    if spec.group.kind == "presentation":
        out["group"] = {
            "type": "presentation",
            "generators": list(spec.group.generators),
            "relators": list(spec.group.relators),
        }
    else:
        out["group"] = {"type": "table", "rows": list(spec.group.table_rows)}
    out["gen_to_cone"] = list(spec.gen_to_cone)
    out["worlds"] = [{"name": n, "color": list(c)} for n, c in spec.worlds]
    if spec.group_only:
        out["group_only"] = True
    return out


def serialize_scene(spec: SceneSpec) -> str:
    return json.dumps(scene_to_dict(spec), indent=2) + "\n"


def builtin_scenes() -> list[SceneSpec]:
    """The example corpus, in fixed order; 'hopf' is group-only."""
    scenes = []
    for name in BUILTIN_ORDER:
        text = resources.files("knotcover.scenes").joinpath(f"{name}.json").read_text()
        scenes.append(parse_scene(text))
    return scenes


def builtin_scene(name: str) -> SceneSpec:
    if name not in BUILTIN_ORDER:
        raise SceneError(
            f"unknown builtin scene {name!r}; available: {', '.join(BUILTIN_ORDER)}"
        )
    text = resources.files("knotcover.scenes").joinpath(f"{name}.json").read_text()
    return parse_scene(text)


def load_scene(path_or_name: str) -> SceneSpec:
    """A builtin scene by name, or a scene file by path."""
    if path_or_name in BUILTIN_ORDER:
        return builtin_scene(path_or_name)
    try:
        with open(path_or_name) as fh:
            return parse_scene(fh.read())
    except FileNotFoundError:
        raise SceneError(
            f"{path_or_name!r} is neither a builtin scene nor a readable file"
        ) from None
