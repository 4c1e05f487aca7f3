"""HTTP service: status codes, response bodies, digest stability."""

import pytest

fastapi = pytest.importorskip("fastapi")

from fastapi.testclient import TestClient

from hopfcheck.api import app

F2 = {"kind": "function_algebra", "group": [[0, 1], [1, 0]]}


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json() == {"tool": "hopfcheck", "version": "0.1.0"}


def test_validate_ok(client):
    r = client.post("/validate", json={"algebra": F2})
    assert r.status_code == 200
    body = r.json()
    assert sorted(body) == ["report", "result"]
    assert body["report"]["pass"] is True
    assert len(body["report"]["entries"]) == 9
    assert body["result"]["dimension"] == 2


def test_parse_error_is_400(client):
    r = client.post("/validate", json={"algebra": {"kind": "nope"}})
    assert r.status_code == 400
    assert "unknown kind" in r.json()["error"]


def test_wrong_kind_is_422(client):
    r = client.post("/span-check", json={"algebra": {"kind": "crossed_base", "of": F2}})
    assert r.status_code == 422
    assert "needs a Hopf algebra" in r.json()["error"]


def test_numerical_failure_stays_200(client):
    r = client.post("/trivialize-1", json={"algebra": F2, "tol": 1e-18})
    assert r.status_code == 200
    assert r.json()["report"]["pass"] is False


def test_level_parameter(client):
    shallow = client.post("/rohlin-check", json={"algebra": F2})
    deep = client.post("/rohlin-check", json={"algebra": F2, "level": 2})
    assert len(shallow.json()["report"]["entries"]) == 18
    assert len(deep.json()["report"]["entries"]) == 38


def test_identical_requests_identical_bytes(client):
    a = client.post("/haar", json={"algebra": F2})
    b = client.post("/haar", json={"algebra": F2})
    assert a.content == b.content


def test_digest_ignores_key_order(client):
    reordered = {"group": [[0, 1], [1, 0]], "kind": "function_algebra"}
    a = client.post("/haar", json={"algebra": F2})
    b = client.post("/haar", json={"algebra": reordered})
    assert a.json()["report"]["input_digest"] == b.json()["report"]["input_digest"]


def test_unknown_route_is_404(client):
    assert client.post("/polish", json={"algebra": F2}).status_code == 404
