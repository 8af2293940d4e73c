import json

import pytest
from fastapi.testclient import TestClient

from hcrs.config import RunConfig
from hcrs.features import DIMENSIONS
from hcrs.service import create_app

from conftest import FIXTURE_ITEMS


@pytest.fixture()
def client(tmp_path, fixture_corpus_path):
    cfg = RunConfig(store=tmp_path / "ratings.jsonl")
    app = create_app(cfg, corpus_path=str(fixture_corpus_path))
    with TestClient(app) as c:
        yield c


def submit(client, item_id, rater, scores, tags=()):
    return client.post(
        "/ratings",
        json={"item_id": item_id, "rater_id": rater, "scores": scores, "tags": list(tags)},
    )


def rate_everything(client, raters=("r1", "r2")):
    for rater in raters:
        while True:
            task = client.get("/survey/next", params={"rater": rater})
            if task.status_code == 204:
                break
            item_id = task.json()["item_id"]
            bias = 1 if rater == "r1" else 0
            scores = {
                d: 1 + (int(item_id[1:]) + k + bias) % 5
                for k, d in enumerate(DIMENSIONS)
            }
            assert submit(client, item_id, rater, scores).status_code == 200


class TestHealthAndItems:
    def test_health(self, client):
        doc = client.get("/health").json()
        assert doc["status"] == "ok"
        assert doc["items"] == 5
        assert isinstance(doc["weightset_id"], str)

    def test_list_items(self, client):
        assert client.get("/items").json()["ids"] == ["i1", "i2", "i3", "i4", "i5"]

    def test_post_items(self, client):
        rec = dict(FIXTURE_ITEMS[0], id="i9")
        resp = client.post("/items", json={"items": [rec]})
        assert resp.status_code == 200
        assert resp.json()["ids"] == ["i9"]
        assert "i9" in client.get("/items").json()["ids"]

    def test_post_items_rejects_bad_payload(self, client):
        assert client.post("/items", json={"items": []}).status_code == 400
        assert client.post("/items", json={"items": [{"id": "x"}]}).status_code == 400


class TestScore:
    def test_score_shape(self, client):
        doc = client.get("/items/i1/score").json()
        assert doc["item_id"] == "i1"
        assert 0.0 <= doc["composite"] <= 1.0
        assert set(doc["dimensions"]) == set(DIMENSIONS)

    def test_unknown_item_404(self, client):
        assert client.get("/items/nope/score").status_code == 404

    def test_repeated_reads_identical(self, client):
        a = client.get("/items/i2/score").text
        b = client.get("/items/i2/score").text
        assert a == b

    def test_rating_does_not_change_score(self, client):
        before = client.get("/items/i1/score").text
        submit(client, "i1", "r1", {d: 5 for d in DIMENSIONS})
        assert client.get("/items/i1/score").text == before


class TestSurvey:
    def test_task_shape(self, client):
        task = client.get("/survey/next", params={"rater": "r1"}).json()
        assert task["item_id"] == "i1"
        assert task["text"] == FIXTURE_ITEMS[0]["output"]
        assert set(task["dimensions"]) == set(DIMENSIONS)
        assert set(task["prompts"]) == set(DIMENSIONS)

    def test_never_reassigns_rated_item(self, client):
        submit(client, "i1", "r1", {"clarity": 4})
        task = client.get("/survey/next", params={"rater": "r1"}).json()
        assert task["item_id"] == "i2"

    def test_prefers_least_rated(self, client):
        # r1 rates i1, so for a fresh rater i1 has coverage 1, others 0
        submit(client, "i1", "r1", {"clarity": 4})
        task = client.get("/survey/next", params={"rater": "r2"}).json()
        assert task["item_id"] == "i2"

    def test_exhaustion_204(self, client):
        for item_id in ("i1", "i2", "i3", "i4", "i5"):
            submit(client, item_id, "r1", {"clarity": 3})
        assert client.get("/survey/next", params={"rater": "r1"}).status_code == 204

    def test_rater_param_required(self, client):
        assert client.get("/survey/next").status_code == 422


class TestRatings:
    def test_accepted(self, client):
        resp = submit(client, "i1", "r1", {"clarity": 4, "tone": 2})
        assert resp.json() == {"v": 1, "accepted": 1, "superseded": False}

    def test_supersession_flag(self, client):
        submit(client, "i1", "r1", {"clarity": 4})
        resp = submit(client, "i1", "r1", {"clarity": 2})
        assert resp.json()["superseded"] is True

    def test_unknown_item_404(self, client):
        assert submit(client, "zzz", "r1", {"clarity": 3}).status_code == 404

    def test_invalid_rating_400_with_reason(self, client):
        resp = submit(client, "i1", "r1", {"clarity": 9})
        assert resp.status_code == 400
        assert resp.json()["error"] == "likert_out_of_range"

    def test_aggregate_after_ratings(self, client):
        submit(client, "i1", "r1", {"clarity": 5})
        submit(client, "i1", "r2", {"clarity": 1})
        doc = client.get("/items/i1/aggregate").json()
        assert doc["mean"]["clarity"] == 3
        assert client.get("/items/i2/aggregate").status_code == 404


class TestCalibrateLoop:
    def test_calibrate_swaps_weightset(self, client):
        rate_everything(client)
        before_id = client.get("/health").json()["weightset_id"]
        before_score = client.get("/items/i3/score").json()
        resp = client.post("/calibrate", json={"min_rows": 4, "folds": 2})
        assert resp.status_code == 200
        doc = resp.json()
        assert doc["weightset_id"] != before_id
        assert client.get("/health").json()["weightset_id"] == doc["weightset_id"]
        after_score = client.get("/items/i3/score").json()
        assert after_score["weightset_id"] == doc["weightset_id"]
        assert 0.0 <= after_score["composite"] <= 1.0

    def test_calibrate_deterministic(self, tmp_path, fixture_corpus_path):
        ids = []
        for name in ("a", "b"):
            cfg = RunConfig(store=tmp_path / f"{name}.jsonl")
            app = create_app(cfg, corpus_path=str(fixture_corpus_path))
            with TestClient(app) as c:
                rate_everything(c)
                ids.append(c.post("/calibrate", json={"min_rows": 4}).json()["weightset_id"])
        assert ids[0] == ids[1]

    def test_calibrate_without_ratings_400(self, client):
        assert client.post("/calibrate", json={"min_rows": 4}).status_code == 400


class TestReporting:
    def test_correlations(self, client):
        rate_everything(client)
        doc = client.get("/correlations").json()
        metrics = {c["metric"] for c in doc["cells"]}
        assert {"FKGL", "SARI", "BLEU", "hcrs_composite"} <= metrics
        for cell in doc["cells"]:
            if cell["pearson_r"] is not None:
                assert -1.0 - 1e-9 <= cell["pearson_r"] <= 1.0 + 1e-9

    def test_agreement(self, client):
        rate_everything(client)
        doc = client.get("/agreement/clarity").json()
        assert doc["raters"] == 2
        assert -1.0 <= doc["alpha"] <= 1.0
        assert client.get("/agreement/clarity").json() == doc

    def test_agreement_insufficient(self, client):
        submit(client, "i1", "r1", {"clarity": 3})
        assert client.get("/agreement/clarity").status_code == 400

    def test_export(self, client):
        submit(client, "i1", "r1", {"clarity": 5})
        rows = client.get("/export").json()["rows"]
        assert rows[0]["item_id"] == "i1"
        assert rows[0]["human"]["clarity"] == 1.0
