import json
import math
import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from refpoint.model import (
    Constraint,
    LinearExpr,
    MoLpModel,
    Objective,
    Sense,
    VariableDef,
    VarKind,
    to_json,
)
from refpoint.scalarize import SolverConfig
from refpoint.service import create_app


def toy_document():
    "Three mutually exclusive options with criterion vectors (0,2), (1,1), (2,0)."
    rows = [(0.0, 2.0), (1.0, 1.0), (2.0, 0.0)]
    variables = tuple(VariableDef(f"y{i}", 0.0, 1.0, VarKind.BINARY) for i in range(3))
    constraints = (Constraint(LinearExpr({f"y{i}": 1.0 for i in range(3)}), Sense.EQ, 1.0),)
    objectives = tuple(
        Objective(f"f{j}", LinearExpr({f"y{i}": rows[i][j] for i in range(3)}))
        for j in range(2)
    )
    model = MoLpModel(variables, constraints, objectives)
    return json.loads(to_json(model))


def infeasible_document():
    model = MoLpModel(
        (VariableDef("x", 0.0, 1.0),),
        (Constraint(LinearExpr({"x": 1.0}), Sense.GE, 5.0),),
        (Objective("f", LinearExpr({"x": 1.0})),),
    )
    return json.loads(to_json(model))


@pytest.fixture()
def client():
    app = create_app(state_dir=None)
    with TestClient(app) as tc:
        yield tc


class TestSessionLifecycle:
    def test_create_returns_bounds(self, client):
        r = client.post("/v1/sessions", json=toy_document())
        assert r.status_code == 201
        body = r.json()
        assert body["criteria"] == ["f0", "f1"]
        assert body["bounds"]["z_min"] == pytest.approx([0.0, 0.0], abs=1e-9)
        assert body["bounds"]["z_max"] == pytest.approx([2.0, 2.0], abs=1e-9)

    def test_invalid_document_is_400(self, client):
        doc = toy_document()
        doc["objectives"] = []
        assert client.post("/v1/sessions", json=doc).status_code == 400

    def test_infeasible_model_is_422(self, client):
        r = client.post("/v1/sessions", json=infeasible_document())
        assert r.status_code == 422
        assert "empty feasible set" in r.json()["detail"]

    def test_unknown_session_404(self, client):
        assert client.get("/v1/sessions/nope/history").status_code == 404
        assert client.post("/v1/sessions/nope/reference",
                           json={"values": [1, 1]}).status_code == 404


class TestReferenceLoop:
    def test_submit_and_history(self, client):
        sid = client.post("/v1/sessions", json=toy_document()).json()["id"]
        assert client.get(f"/v1/sessions/{sid}/history").json() == []
        r = client.post(f"/v1/sessions/{sid}/reference", json={"values": [0.9, 0.9]})
        assert r.status_code == 200
        record = r.json()
        assert record["status"] == "optimal"
        assert record["criteria"] == pytest.approx([1.0, 1.0], abs=1e-7)
        for _ in range(2):
            client.post(f"/v1/sessions/{sid}/reference", json={"values": [2.0, 2.0]})
        history = client.get(f"/v1/sessions/{sid}/history").json()
        assert len(history) == 3
        assert history[0]["reference"] == [0.9, 0.9]

    def test_ideal_reference_nonpositive_achievement(self, client):
        sid = client.post("/v1/sessions", json=toy_document()).json()["id"]
        r = client.post(f"/v1/sessions/{sid}/reference", json={"values": [2.0, 2.0]})
        assert r.json()["achievement"] <= 1e-9

    def test_resubmitted_point_weakly_dominated(self, client):
        sid = client.post("/v1/sessions", json=toy_document()).json()["id"]
        first = client.post(f"/v1/sessions/{sid}/reference",
                            json={"values": [0.9, 0.9]}).json()
        again = client.post(f"/v1/sessions/{sid}/reference",
                            json={"values": first["criteria"]}).json()
        assert all(v >= r - 1e-9 for v, r in zip(again["criteria"], first["criteria"]))

    def test_identical_submissions_identical_results(self, client):
        sid = client.post("/v1/sessions", json=toy_document()).json()["id"]
        a = client.post(f"/v1/sessions/{sid}/reference", json={"values": [1.5, 0.2]}).json()
        b = client.post(f"/v1/sessions/{sid}/reference", json={"values": [1.5, 0.2]}).json()
        assert a["criteria"] == b["criteria"]
        assert a["achievement"] == b["achievement"]

    def test_wrong_arity_400(self, client):
        sid = client.post("/v1/sessions", json=toy_document()).json()["id"]
        r = client.post(f"/v1/sessions/{sid}/reference", json={"values": [1.0]})
        assert r.status_code == 400


class TestAsyncResults:
    def test_token_flow_when_not_waiting(self):
        app = create_app(state_dir=None, sync_wait=0.0)
        with TestClient(app) as tc:
            sid = tc.post("/v1/sessions", json=toy_document()).json()["id"]
            r = tc.post(f"/v1/sessions/{sid}/reference", json={"values": [0.9, 0.9]})
            assert r.status_code == 202
            token = r.json()["token"]
            deadline = time.time() + 30
            while time.time() < deadline:
                poll = tc.get(f"/v1/sessions/{sid}/results/{token}")
                if poll.status_code == 200:
                    assert poll.json()["criteria"] == pytest.approx([1.0, 1.0], abs=1e-7)
                    break
                assert poll.status_code == 202
                time.sleep(0.02)
            else:
                pytest.fail("async result never landed")
            assert tc.get(f"/v1/sessions/{sid}/results/bogus").status_code == 404


class TestPersistence:
    def test_history_survives_restart(self, tmp_path):
        state = str(tmp_path / "state")
        app = create_app(state_dir=state)
        with TestClient(app) as tc:
            sid = tc.post("/v1/sessions", json=toy_document()).json()["id"]
            tc.post(f"/v1/sessions/{sid}/reference", json={"values": [0.9, 0.9]})
            tc.post(f"/v1/sessions/{sid}/reference", json={"values": [2.0, 2.0]})
            before = tc.get(f"/v1/sessions/{sid}/history").json()
        app2 = create_app(state_dir=state)
        with TestClient(app2) as tc:
            after = tc.get(f"/v1/sessions/{sid}/history").json()
            assert after == before
            info = tc.get(f"/v1/sessions/{sid}").json()
            assert info["history_length"] == 2


class TestDemos:
    def test_mdp_demo_session_solves_with_policy(self, client):
        r = client.post("/v1/demos/mdp", json={"seed": 1, "states": 4, "horizon": 4})
        assert r.status_code == 201
        body = r.json()
        sid = body["id"]
        assert body["criteria"] == ["prey", "predator"]
        result = client.post(f"/v1/sessions/{sid}/reference",
                             json={"values": body["bounds"]["z_max"]}).json()
        policy = result["decision"]["policy"]
        assert result["decision"]["kind"] == "policy"
        assert len(policy) == 4  # one row per epoch
        for epoch in policy:
            for dist in epoch:
                assert sum(dist) == pytest.approx(1.0, abs=1e-9)

    def test_grid_demo_session_solves_with_mask(self, client):
        r = client.post("/v1/demos/grid", json={"seed": 3, "rows": 4, "cols": 4, "k": 2})
        assert r.status_code == 201
        body = r.json()
        zmin, zmax = body["bounds"]["z_min"], body["bounds"]["z_max"]
        assert len(zmin) == 5
        assert all(a < b for a, b in zip(zmin, zmax))
        result = client.post(f"/v1/sessions/{body['id']}/reference",
                             json={"values": zmax}).json()
        mask = result["decision"]["mask"]
        assert result["decision"]["kind"] == "cell_mask"
        assert len(mask) == 4 and all(len(row) == 4 for row in mask)
        assert sum(row.count("1") for row in mask) == 2

    def test_unknown_demo_kind(self, client):
        assert client.post("/v1/demos/maze", json={}).status_code == 404
