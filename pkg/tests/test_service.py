import numpy as np
import pytest

pytest.importorskip("httpx")
from fastapi.testclient import TestClient

from knotcover.scene import builtin_scene, serialize_scene
from knotcover.service import create_app


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app()) as c:
        yield c


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"


def test_scene_listing(client):
    scenes = client.get("/scenes").json()
    names = [s["name"] for s in scenes]
    assert names == [
        "unknot",
        "twisted-unknot",
        "trefoil",
        "figure-eight",
        "solomon-seal",
        "hopf",
    ]
    by_name = {s["name"]: s for s in scenes}
    assert by_name["trefoil"]["group_order"] == 6
    assert by_name["trefoil"]["piece_count"] == 3
    assert by_name["twisted-unknot"]["piece_count"] == 2
    assert by_name["hopf"]["group_only"] is True
    assert len(by_name["trefoil"]["worlds"]) == 6


def test_scene_detail_roundtrips(client):
    body = client.get("/scenes/trefoil").json()
    assert body["version"] == 1
    assert body["gen_to_cone"] == ["a", "b", "c"]


def test_unknown_scene_404(client):
    assert client.get("/scenes/granny").status_code == 404
    assert client.post("/sessions", json={"scene": "granny"}).status_code == 404


def test_validate_endpoint(client):
    ok = client.post(
        "/scenes/validate", json={"text": serialize_scene(builtin_scene("unknot"))}
    ).json()
    assert ok["valid"] and ok["group_order"] == 2 and ok["piece_count"] == 1
    bad = client.post("/scenes/validate", json={"text": "{"}).json()
    assert not bad["valid"]
    assert "line" in bad["error"]


def test_group_only_scene_has_no_sessions(client):
    r = client.post("/sessions", json={"scene": "hopf"})
    assert r.status_code == 409


def test_unknot_walkthrough_protocol(client):
    r = client.post("/sessions", json={"scene": "unknot", "width": 320, "height": 240})
    assert r.status_code == 200
    sid = r.json()["session"]
    frame = r.json()["frame"]
    assert frame["version"] == 1
    assert frame["world"] == "ice"
    assert frame["regions"]
    for region in frame["regions"]:
        assert region["color"] and len(region["loops"]) >= 1

    worlds = [frame["world"]]
    for _ in range(14):
        frame = client.post(
            f"/sessions/{sid}/step",
            json={"move": [1, 0, 0], "look": {"yaw": 0, "pitch": 0}, "dt": 1},
        ).json()
        worlds.append(frame["world"])
    assert "forest" in worlds  # crossed the cut surface
    flip = worlds.index("forest")
    assert all(w == "ice" for w in worlds[:flip])

    # turn around and walk back: the world flips home
    client.post(
        f"/sessions/{sid}/step",
        json={"move": [0, 0, 0], "look": {"yaw": np.pi, "pitch": 0}, "dt": 1},
    )
    back = []
    for _ in range(16):
        frame = client.post(
            f"/sessions/{sid}/step",
            json={"move": [1, 0, 0], "look": {"yaw": 0, "pitch": 0}, "dt": 1},
        ).json()
        back.append(frame["world"])
    assert back[-1] == "ice"

    info = client.get(f"/sessions/{sid}").json()
    assert info["world"] == "ice"
    assert client.delete(f"/sessions/{sid}").json()["closed"] == sid
    assert client.get(f"/sessions/{sid}").status_code == 404


def test_step_reports_crossing_events(client):
    sid = client.post("/sessions", json={"scene": "unknot"}).json()["session"]
    seen = []
    for _ in range(14):
        frame = client.post(
            f"/sessions/{sid}/step",
            json={"move": [1, 0, 0], "look": {"yaw": 0, "pitch": 0}, "dt": 1},
        ).json()
        seen.extend(frame["events"])
    assert any(ev["applied"] == "a" for ev in seen)
    for ev in seen:
        assert ev["sign"] in (-1, 1)
    client.delete(f"/sessions/{sid}")


def test_rotation_in_place_keeps_world(client):
    sid = client.post("/sessions", json={"scene": "trefoil"}).json()["session"]
    worlds = set()
    for _ in range(8):
        frame = client.post(
            f"/sessions/{sid}/step",
            json={"move": [0, 0, 0], "look": {"yaw": 0.7853981, "pitch": 0}, "dt": 1},
        ).json()
        worlds.add(frame["world"])
        assert frame["events"] == []
    assert worlds == {"ice"}
    client.delete(f"/sessions/{sid}")


def test_trefoil_session_visits_three_worlds(client):
    sid = client.post("/sessions", json={"scene": "trefoil"}).json()["session"]
    seq = ["ice"]
    for _ in range(3):
        frame = client.post(
            f"/sessions/{sid}/step",
            json={"move": [0, 0, 1], "look": {"yaw": 0, "pitch": 0}, "dt": 1},
        ).json()
        seq.append(frame["world"])
    for _ in range(10):
        frame = client.post(
            f"/sessions/{sid}/step",
            json={"move": [1, 0, 0], "look": {"yaw": 0, "pitch": 0}, "dt": 1},
        ).json()
        seq.append(frame["world"])
    assert len(set(seq)) >= 3
    client.delete(f"/sessions/{sid}")
