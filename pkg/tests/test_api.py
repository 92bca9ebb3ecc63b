def test_root(client):
    response = client.get("/")
    assert response.status_code == 200
    assert response.json()["status"] == "online"
    assert "s3" in response.json()["groups"]


def test_theory_endpoint(client):
    response = client.get("/api/groups/s3/theory")
    assert response.status_code == 200
    data = response.json()
    assert data["theory"]["dims"] == [1, 1, 2, 3, 3, 2, 2, 2]
    assert all(data["checks"].values())
    assert data["anyon_kinds"]["E"] == "dyon"


def test_diagram_endpoint(client):
    data = client.get("/api/groups/s3/diagram").json()
    assert len(data["rows"]) == 6 and len(data["columns"]) == 6


def test_unknown_group(client):
    assert client.get("/api/groups/a5/theory").status_code == 404


def test_forbid_endpoint(client):
    response = client.post("/api/forbid", json={"group": "s3", "classes": ["Cx", "Cy"]})
    assert response.status_code == 200
    body = response.json()
    assert body["report"]["final"]["name"] == "z3"
    assert "Z3" in body["markdown"]


def test_forbid_vacuum_rejected(client):
    response = client.post("/api/forbid", json={"group": "s3", "irreps": ["Gamma1"]})
    assert response.status_code == 400
    assert response.json()["detail"]["error"] == "VacuumForbidden"


def test_forbid_html(client):
    response = client.post("/api/forbid/html", json={"group": "s3", "irreps": ["Gamma2"]})
    assert response.status_code == 200
    assert "<h3>Result: SU(2)_4</h3>" in response.text


def test_catalog_endpoint(client):
    names = [e["name"] for e in client.get("/api/catalog").json()]
    assert names[:2] == ["d_s3", "d_z3"]
