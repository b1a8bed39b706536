import pytest
from fastapi.testclient import TestClient

from main import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    response = client.get("/api/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


def test_diagram(client):
    response = client.post("/api/diagram", json={"blocks": [2, 1, 3, 2]})
    assert response.status_code == 200
    body = response.json()
    assert body["success"] is True
    assert body["data"]["status"] == "completed"
    assert '"Psi1"' in body["data"]["output"]


def test_invariants(client):
    response = client.post("/api/invariants", json={"blocks": [1, 2, 2, 1], "format": "ascii", "which": "B"})
    assert response.status_code == 200
    assert response.json()["data"]["output"] == "B(4,6) = L(2,4)*L(4,6) / (M(1,2)*M(5,6)*M(2,5))\n"


def test_canonicalize(client):
    point = {"n": 6, "entries": [
        {"row": 1, "col": 2, "value": "2"}, {"row": 2, "col": 4, "value": "3"},
        {"row": 3, "col": 4, "value": "5"}, {"row": 5, "col": 6, "value": "7"},
        {"row": 2, "col": 5, "value": "11"}, {"row": 4, "col": 6, "value": "13"},
    ]}
    response = client.post("/api/canonicalize", json={"blocks": [1, 2, 2, 1], "point": point})
    assert response.status_code == 200
    data = response.json()["data"]["data"]
    assert data["coefficients"] == [{"row": 4, "col": 6, "value": "39/77"}]


def test_orbit_dimension(client):
    response = client.get("/api/orbit-dimension", params={"blocks": "2,2,3,3,2"})
    assert response.status_code == 200
    assert response.json()["data"]["data"] == {"dim_m": 57, "psi": 5, "orbit_dimension": 52}


@pytest.mark.parametrize("blocks", ["2,0", "x"])
def test_orbit_dimension_rejects_bad_blocks(client, blocks):
    response = client.get("/api/orbit-dimension", params={"blocks": blocks})
    assert response.status_code == 400
    assert response.json()["success"] is False


def test_invalid_block_size_in_body(client):
    response = client.post("/api/diagram", json={"blocks": [2, -1]})
    assert response.status_code == 400
    assert "not positive" in response.json()["error"]
