import math

import pytest
from fastapi.testclient import TestClient

from app.main import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_root(client):
    assert client.get("/").json()["status"] == "ok"


def test_catalog_lists_builtin_curves(client):
    response = client.get("/curves/catalog")
    assert response.status_code == 200
    items = {item["name"]: item for item in response.json()}
    assert items["circular-helix"]["defaults"] == [1.0, 1.0]
    assert items["paper-example"]["params"] == 0


def test_analyze_returns_table_and_report(client):
    response = client.post("/curves/analyze", json={"catalog": "circular-helix:1,1", "samples": 16})
    assert response.status_code == 200
    body = response.json()
    assert body["columns"][-3:] == ["kappa", "tau", "psi"]
    assert len(body["rows"]) == 16
    checks = {c["name"]: c for c in body["report"]["checks"]}
    assert checks["helix.kind"]["value"] == "circular"


def test_spec_text_input(client):
    spec = 'x = "2*cos(t)"\ny = "2*sin(t)"\nz = "t"\ndomain = 0 6\n'
    response = client.post("/curves/analyze", json={"spec": spec, "samples": 8})
    assert response.status_code == 200
    kappa = response.json()["rows"][0][-3]
    assert kappa == pytest.approx(0.4, abs=1e-9)


def test_unknown_curve_is_bad_request(client):
    response = client.post("/curves/analyze", json={"catalog": "no-such-curve"})
    assert response.status_code == 400
    assert response.json()["error"] == "UnknownCurve"


def test_numeric_failure_is_unprocessable(client):
    response = client.post("/curves/analyze", json={"catalog": "line", "samples": 8})
    assert response.status_code == 422
    assert response.json()["error"] == "InflectionPoint"


@pytest.mark.parametrize("body", [
    {},
    {"catalog": "circle", "spec": 'x = "t"'},
    {"catalog": "circle", "samples": 2},
])
def test_request_validation(client, body):
    assert client.post("/curves/analyze", json=body).status_code == 422


def test_degenerate_indicatrix_is_skipped(client):
    response = client.post("/curves/indicatrix", json={"catalog": "circular-helix", "which": "C", "samples": 16})
    assert response.status_code == 200
    body = response.json()
    assert body["rows"] == []
    assert body["report"]["checks"][0]["status"] == "SKIP"


def test_bertrand_endpoint(client):
    response = client.post("/curves/bertrand", json={
        "catalog": "circular-helix:1,1", "theta": math.pi / 3, "samples": 32,
    })
    assert response.status_code == 200
    checks = {c["name"]: c for c in response.json()["report"]["checks"]}
    assert checks["bertrand.helix-kind"]["value"] == "circular"


def test_bertrand_parameters_are_checked(client):
    response = client.post("/curves/bertrand", json={"catalog": "circle", "a": 0.0})
    assert response.status_code == 400


def test_verify_endpoint(client):
    response = client.post("/curves/verify", json={"catalog": "circle", "suite": "corollaries", "samples": 32})
    assert response.status_code == 200
    statuses = {c["name"]: c["status"] for c in response.json()["report"]["checks"]}
    assert statuses["corollary4.circular-helix"] == "PREMISE-NOT-MET"
