import json
import shutil
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from contron.config import Config
from contron.service import create_app

from conftest import FIXTURES, FIXTURE_THRESHOLD


@pytest.fixture
def data_dir(tmp_path) -> Path:
    root = tmp_path / "data"
    root.mkdir()
    shutil.copy(FIXTURES / "ontology" / "core.json", root / "ontology.json")
    config = {
        "manifest": str(FIXTURES / "corpus" / "manifest.tsv"),
        "cache_dir": str(FIXTURES / "kb_cache"),
        "offline": True,
        "threshold": FIXTURE_THRESHOLD,
    }
    (root / "config.json").write_text(json.dumps(config), "utf-8")
    return root


@pytest.fixture
def client(data_dir) -> TestClient:
    app = create_app(data_dir)
    with TestClient(app) as test_client:
        yield test_client


def run_enrich(client: TestClient) -> dict:
    response = client.post("/api/pipeline/enrich")
    assert response.status_code == 200, response.text
    run = response.json()
    assert run["state"] == "done"
    return run


def queue_item(client: TestClient, class_id: str) -> dict:
    items = client.get("/api/queue").json()["items"]
    return next(i for i in items if i["class_id"] == class_id)


class TestPipeline:
    def test_enrich_run_summary(self, client):
        run = run_enrich(client)
        assert run["summary"]["outcomes"] == {"auto": 13, "review": 7, "no_match": 6}
        assert run["summary"]["errors"] == {}
        status = client.get(f"/api/pipeline/runs/{run['run_id']}").json()
        assert status["state"] == "done"

    def test_queue_sorted_by_best_similarity(self, client):
        run_enrich(client)
        items = client.get("/api/queue").json()["items"]
        assert len(items) == 13  # 7 review + 6 no-match
        similarities = [
            max((c["similarity"] for c in i["candidates"]), default=0.0) for i in items
        ]
        assert similarities == sorted(similarities, reverse=True)
        assert items[0]["class_id"] == "core:hardware_interface"

    def test_run_in_flight_conflicts(self, client):
        store = client.app.state.store
        assert store.run_lock.acquire(blocking=False)
        try:
            response = client.post("/api/pipeline/enrich")
            assert response.status_code == 409
        finally:
            store.run_lock.release()

    def test_extract_writes_annotations(self, client):
        run_enrich(client)
        run = client.post("/api/pipeline/extract").json()
        assert run["summary"]["documents"] == 5
        annotations = client.get("/api/documents/st200/annotations").json()
        assert annotations["doc_id"] == "st200"
        assert annotations["annotations"]
        assert client.get("/api/documents/zzz/annotations").status_code == 404

    def test_unknown_run_404(self, client):
        assert client.get("/api/pipeline/runs/enrich-9999").status_code == 404

    def test_document_text_served(self, client):
        body = client.get("/api/documents/st200").json()
        assert body["text"].startswith("ST-200")
        assert client.get("/api/documents/nope").status_code == 404


class TestDecisions:
    def test_select_confirms_class(self, client):
        run_enrich(client)
        item = queue_item(client, "core:interface")
        version_before = client.get("/api/ontology").json()["version"]
        response = client.post(
            f"/api/queue/{item['item_id']}/decision",
            json={"action": "select", "entity_id": "Q-IFACE-HW", "actor": "alex"},
        )
        assert response.status_code == 200, response.text
        ontology = client.get("/api/ontology").json()
        cls = next(c for c in ontology["classes"] if c["class_id"] == "core:interface")
        assert cls["matched_entity"] == "Q-IFACE-HW"
        assert cls["review_status"] == "expert_confirmed"
        assert ontology["version"] == version_before + 1
        remaining = {i["class_id"] for i in client.get("/api/queue").json()["items"]}
        assert "core:interface" not in remaining

    def test_version_grows_by_one_per_decision(self, client):
        run_enrich(client)
        before = client.get("/api/ontology").json()["version"]
        for class_id, entity_id in (
            ("core:interface", "Q-IFACE-HW"),
            ("core:accuracy", "Q-ACCURACY"),
        ):
            item = queue_item(client, class_id)
            client.post(
                f"/api/queue/{item['item_id']}/decision",
                json={"action": "select", "entity_id": entity_id},
            )
        assert client.get("/api/ontology").json()["version"] == before + 2

    def test_replay_is_idempotent(self, client):
        run_enrich(client)
        item = queue_item(client, "core:interface")
        body = {"action": "select", "entity_id": "Q-IFACE-HW"}
        first = client.post(f"/api/queue/{item['item_id']}/decision", json=body)
        version = client.get("/api/ontology").json()["version"]
        replay = client.post(f"/api/queue/{item['item_id']}/decision", json=body)
        assert replay.status_code == 200
        assert replay.json()["replayed"] is True
        assert client.get("/api/ontology").json()["version"] == version

    def test_conflicting_decision_409(self, client):
        run_enrich(client)
        item = queue_item(client, "core:interface")
        client.post(
            f"/api/queue/{item['item_id']}/decision",
            json={"action": "select", "entity_id": "Q-IFACE-HW"},
        )
        conflict = client.post(
            f"/api/queue/{item['item_id']}/decision", json={"action": "skip"}
        )
        assert conflict.status_code == 409

    def test_select_outside_candidates_400(self, client):
        run_enrich(client)
        item = queue_item(client, "core:interface")
        response = client.post(
            f"/api/queue/{item['item_id']}/decision",
            json={"action": "select", "entity_id": "Q-NOT-THERE"},
        )
        assert response.status_code == 400

    def test_unknown_item_404(self, client):
        assert (
            client.post(
                "/api/queue/enrich-0001:nope/decision", json={"action": "skip"}
            ).status_code
            == 404
        )

    def test_skip_resolves_without_mutation(self, client):
        run_enrich(client)
        item = queue_item(client, "core:range")
        before = client.get("/api/ontology").json()["version"]
        response = client.post(
            f"/api/queue/{item['item_id']}/decision", json={"action": "skip"}
        )
        assert response.status_code == 200
        assert client.get("/api/ontology").json()["version"] == before
        assert "core:range" not in {
            i["class_id"] for i in client.get("/api/queue").json()["items"]
        }

    def test_disjoint_then_rerun_never_reproposes(self, client):
        run_enrich(client)
        item = queue_item(client, "core:data_rate")
        response = client.post(
            f"/api/queue/{item['item_id']}/decision",
            json={"action": "disjoint", "entity_ids": ["Q-BITRATE"]},
        )
        assert response.status_code == 200
        run_enrich(client)
        for queue_entry in client.get("/api/queue").json()["items"]:
            if queue_entry["class_id"] == "core:data_rate":
                proposed = {c["entity_id"] for c in queue_entry["candidates"]}
                assert "Q-BITRATE" not in proposed
        history = client.get("/api/ontology/history").json()
        ontology = client.get("/api/ontology").json()
        cls = next(c for c in ontology["classes"] if c["class_id"] == "core:data_rate")
        assert "Q-BITRATE" in cls["disjoint_entities"]
        assert history["entries"]

    def test_decisions_durable_across_restart(self, client, data_dir):
        run_enrich(client)
        item = queue_item(client, "core:interface")
        client.post(
            f"/api/queue/{item['item_id']}/decision",
            json={"action": "select", "entity_id": "Q-IFACE-HW"},
        )
        reopened = TestClient(create_app(data_dir))
        ontology = reopened.get("/api/ontology").json()
        cls = next(c for c in ontology["classes"] if c["class_id"] == "core:interface")
        assert cls["review_status"] == "expert_confirmed"
        assert (data_dir / "decisions.jsonl").exists()


class TestHistory:
    def test_history_versions_contiguous(self, client):
        run_enrich(client)
        history = client.get("/api/ontology/history").json()
        versions = [e["version"] for e in history["entries"]]
        assert versions == list(range(1, history["version"] + 1))


class TestAuth:
    def test_token_guard(self, data_dir):
        config = Config.load(data_dir / "config.json", auth_token="sesame")
        app = create_app(data_dir, config=config)
        with TestClient(app) as guarded:
            assert guarded.get("/api/queue").status_code == 401
            assert (
                guarded.get("/api/queue", headers={"X-Auth-Token": "sesame"}).status_code
                == 200
            )
