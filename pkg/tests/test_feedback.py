import json

import pytest

from hcrs.feedback import (
    FeedbackStore,
    InsufficientOverlapError,
    NoFeedbackError,
    TAG_DIMENSION_MAP,
    TAGS,
)


def rec(item, rater, scores, tags=(), **kw):
    return {"item_id": item, "rater_id": rater, "scores": scores, "tags": list(tags), **kw}


@pytest.fixture()
def store(tmp_path):
    return FeedbackStore(tmp_path / "store.jsonl")


class TestIngest:
    def test_valid_batch(self, store):
        result = store.ingest(
            [
                rec("i1", "r1", {"clarity": 4}),
                rec("i1", "r2", {"clarity": 5, "tone": 3}),
                rec("i2", "r1", {"actionability": 2}),
            ]
        )
        assert result.accepted == 3
        assert result.rejections == []

    def test_likert_out_of_range(self, store):
        result = store.ingest([rec("i1", "r1", {"clarity": 6})])
        assert result.accepted == 0
        assert result.rejections[0]["reason"] == "likert_out_of_range"

    def test_rejection_does_not_abort_batch(self, store):
        result = store.ingest(
            [rec("i1", "r1", {"clarity": 4}), {"scores": {"clarity": 3}}, rec("i2", "r2", {"tone": 1})]
        )
        assert result.accepted == 2
        assert result.rejections == [{"index": 1, "reason": "missing_item_id"}]

    @pytest.mark.parametrize(
        "record,reason",
        [
            (rec("i1", "r1", {}), "no_dimensions_rated"),
            (rec("i1", "r1", {"sparkle": 3}), "unknown_dimension"),
            (rec("i1", "r1", {"clarity": 3.5}), "likert_not_integer"),
            (rec("i1", "r1", {"clarity": 3}, tags=["bogus"]), "unknown_tag"),
            (rec("i1", "", {"clarity": 3}), "missing_rater_id"),
        ],
    )
    def test_rejection_reasons(self, store, record, reason):
        result = store.ingest([record])
        assert result.rejections[0]["reason"] == reason

    def test_supersession_keeps_latest(self, store):
        store.ingest([rec("i1", "r1", {"clarity": 2})])
        store.ingest([rec("i1", "r1", {"clarity": 5})])
        agg = store.aggregate("i1")
        assert agg.count["clarity"] == 1
        assert agg.mean["clarity"] == 5


class TestAggregate:
    def test_single_rating(self, store):
        store.ingest([rec("i1", "r1", {"clarity": 5})])
        agg = store.aggregate("i1")
        assert agg.mean["clarity"] == 5
        assert agg.normalized_mean["clarity"] == 1.0

    def test_mean_and_median(self, store):
        store.ingest([rec("i1", "r1", {"clarity": 1}), rec("i1", "r2", {"clarity": 5})])
        agg = store.aggregate("i1")
        assert agg.mean["clarity"] == 3
        assert agg.median["clarity"] == 3
        assert agg.normalized_mean["clarity"] == 0.5

    def test_tag_histogram(self, store):
        store.ingest(
            [
                rec("i1", "r1", {"clarity": 3}, tags=["too_technical"]),
                rec("i1", "r2", {"clarity": 2}, tags=["too_technical", "missing_information"]),
            ]
        )
        assert store.aggregate("i1").tag_histogram == {
            "too_technical": 2,
            "missing_information": 1,
        }

    def test_no_feedback_errors(self, store):
        with pytest.raises(NoFeedbackError):
            store.aggregate("missing")

    def test_order_independence(self, tmp_path):
        records = [
            rec("i1", "r1", {"clarity": 2}),
            rec("i1", "r2", {"clarity": 4}),
            rec("i2", "r1", {"tone": 3}),
        ]
        a = FeedbackStore(tmp_path / "a.jsonl")
        a.ingest(records)
        b = FeedbackStore(tmp_path / "b.jsonl")
        b.ingest(records[::-1])
        assert a.aggregate("i1").mean == b.aggregate("i1").mean


class TestAgreement:
    def test_perfect_agreement(self, store):
        store.ingest(
            [
                rec("i1", "r1", {"clarity": 4}),
                rec("i1", "r2", {"clarity": 4}),
                rec("i2", "r1", {"clarity": 2}),
                rec("i2", "r2", {"clarity": 2}),
            ]
        )
        assert store.agreement("clarity").alpha == pytest.approx(1.0)

    def test_systematic_disagreement_negative(self, store):
        store.ingest(
            [
                rec("i1", "r1", {"clarity": 1}),
                rec("i1", "r2", {"clarity": 5}),
                rec("i2", "r1", {"clarity": 5}),
                rec("i2", "r2", {"clarity": 1}),
            ]
        )
        assert store.agreement("clarity").alpha < 0

    def test_hand_computed_value(self, store):
        # d_o = 16, d_e = 32/3 -> alpha = 1 - 3/2
        store.ingest(
            [
                rec("i1", "r1", {"clarity": 1}),
                rec("i1", "r2", {"clarity": 5}),
                rec("i2", "r1", {"clarity": 5}),
                rec("i2", "r2", {"clarity": 1}),
            ]
        )
        assert store.agreement("clarity").alpha == pytest.approx(-0.5)

    def test_single_rater_errors(self, store):
        store.ingest([rec("i1", "r1", {"clarity": 4}), rec("i2", "r1", {"clarity": 2})])
        with pytest.raises(InsufficientOverlapError):
            store.agreement("clarity")

    def test_missing_cells_allowed(self, store):
        store.ingest(
            [
                rec("i1", "r1", {"clarity": 4}),
                rec("i1", "r2", {"clarity": 4}),
                rec("i2", "r1", {"clarity": 3}),  # only one rater on i2
            ]
        )
        report = store.agreement("clarity")
        assert report.alpha == pytest.approx(1.0)
        assert report.item_count == 2


class TestPersistence:
    def test_replay_reproduces_state(self, tmp_path):
        path = tmp_path / "store.jsonl"
        store = FeedbackStore(path)
        store.ingest([rec("i1", "r1", {"clarity": 4}, tags=["too_technical"])])
        store.ingest([rec("i1", "r1", {"clarity": 2})])
        replayed = FeedbackStore(path)
        assert replayed.aggregate("i1").to_json() == store.aggregate("i1").to_json()

    def test_append_only_with_checksum_trailer(self, tmp_path):
        path = tmp_path / "store.jsonl"
        store = FeedbackStore(path)
        store.ingest([rec("i1", "r1", {"clarity": 4})])
        before = path.read_text()
        store.ingest([rec("i2", "r2", {"tone": 3})])
        after = path.read_text()
        assert after.startswith(before)
        kinds = [json.loads(l)["kind"] for l in after.splitlines()]
        assert kinds == ["rating", "checksum", "rating", "checksum"]

    def test_full_history_reconstructible(self, tmp_path):
        path = tmp_path / "store.jsonl"
        store = FeedbackStore(path)
        store.ingest([rec("i1", "r1", {"clarity": 2})])
        store.ingest([rec("i1", "r1", {"clarity": 5})])
        ratings = [
            json.loads(l)
            for l in path.read_text().splitlines()
            if json.loads(l)["kind"] == "rating"
        ]
        assert [r["scores"]["clarity"] for r in ratings] == [2, 5]


class TestExport:
    def test_export_rows(self, store):
        store.ingest([rec("i1", "r1", {"clarity": 5, "tone": 3})])
        rows = store.export_rows()
        assert rows == [
            {
                "v": 1,
                "item_id": "i1",
                "human": {"clarity": 1.0, "tone": 0.5},
                "count": {"clarity": 1, "tone": 1},
                "tag_histogram": {},
            }
        ]

    def test_since_filter(self, store):
        store.ingest([rec("i1", "r1", {"clarity": 5}, timestamp=1.0)])
        store.ingest([rec("i2", "r1", {"clarity": 2}, timestamp=10.0)])
        rows = store.export_rows(since=5.0)
        assert [r["item_id"] for r in rows] == ["i2"]


def test_tag_map_is_total():
    assert set(TAG_DIMENSION_MAP) == set(TAGS)
