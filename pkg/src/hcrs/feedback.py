"""Append-only store for human ratings and structured tags.

Records are JSONL, one per line, with a schema version field and a
checksum trailer per ingested batch. Nothing is ever rewritten: a repeat
rating for the same (item, rater, dimension) supersedes the earlier one
at read time, and replaying the log from empty reproduces the store state
exactly.
"""
from __future__ import annotations

import hashlib
import json
import statistics
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

__all__ = [
    "HumanRating",
    "AggregatedRating",
    "AgreementReport",
    "IngestResult",
    "FeedbackStore",
    "NoFeedbackError",
    "InsufficientOverlapError",
    "TAGS",
    "TAG_DIMENSION_MAP",
]

from .features import DIMENSIONS

TAGS = ("too_technical", "missing_information", "poorly_structured")

# configurable default assignment of failure tags to HCRS dimensions
TAG_DIMENSION_MAP = {
    "too_technical": "clarity",
    "poorly_structured": "clarity",
    "missing_information": "actionability",
}


class NoFeedbackError(KeyError):
    pass


class InsufficientOverlapError(ValueError):
    pass


@dataclass(frozen=True)
class HumanRating:
    rating_id: str
    item_id: str
    rater_id: str
    scores: dict[str, int]  # dimension -> Likert 1..5
    tags: tuple[str, ...] = ()
    comment: str | None = None
    timestamp: float = 0.0
    population: str | None = None

    def to_json(self) -> dict:
        return {
            "v": 1,
            "kind": "rating",
            "rating_id": self.rating_id,
            "item_id": self.item_id,
            "rater_id": self.rater_id,
            "scores": dict(self.scores),
            "tags": list(self.tags),
            "comment": self.comment,
            "timestamp": self.timestamp,
            "population": self.population,
        }


@dataclass(frozen=True)
class AggregatedRating:
    item_id: str
    mean: dict[str, float]
    median: dict[str, float]
    count: dict[str, int]
    normalized_mean: dict[str, float]
    tag_histogram: dict[str, int]

    def to_json(self) -> dict:
        return {
            "v": 1,
            "item_id": self.item_id,
            "mean": self.mean,
            "median": self.median,
            "count": self.count,
            "normalized_mean": self.normalized_mean,
            "tag_histogram": self.tag_histogram,
        }


@dataclass(frozen=True)
class AgreementReport:
    dimension: str
    alpha: float
    rater_count: int
    item_count: int


@dataclass(frozen=True)
class IngestResult:
    accepted: int
    rejections: list[dict] = field(default_factory=list)


def _validate_record(rec: dict) -> str | None:
    """Rejection reason for a raw rating record, or None if valid."""
    if not isinstance(rec, dict):
        return "not_an_object"
    if not rec.get("item_id"):
        return "missing_item_id"
    if not rec.get("rater_id"):
        return "missing_rater_id"
    scores = rec.get("scores")
    if not isinstance(scores, dict) or not scores:
        return "no_dimensions_rated"
    for dim, value in scores.items():
        if dim not in DIMENSIONS:
            return "unknown_dimension"
        if not isinstance(value, int) or isinstance(value, bool):
            return "likert_not_integer"
        if not 1 <= value <= 5:
            return "likert_out_of_range"
    for tag in rec.get("tags", []):
        if tag not in TAGS:
            return "unknown_tag"
    return None


class FeedbackStore:
    """Single-writer append log with read-time supersession."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._ratings: list[HumanRating] = []
        self._seq = 0
        if self.path.exists():
            self._replay()

    def _replay(self) -> None:
        for line in self.path.read_text().splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            if rec.get("kind") != "rating":
                continue
            self._append_memory(rec)

    def _append_memory(self, rec: dict) -> HumanRating:
        rating = HumanRating(
            rating_id=rec["rating_id"],
            item_id=rec["item_id"],
            rater_id=rec["rater_id"],
            scores={d: int(v) for d, v in rec["scores"].items()},
            tags=tuple(rec.get("tags", [])),
            comment=rec.get("comment"),
            timestamp=float(rec.get("timestamp", 0.0)),
            population=rec.get("population"),
        )
        self._ratings.append(rating)
        self._seq += 1
        return rating

    def ingest(self, records: list[dict]) -> IngestResult:
        """Validate and append a batch; invalid records never abort it."""
        accepted_lines: list[str] = []
        rejections: list[dict] = []
        accepted = 0
        for idx, rec in enumerate(records):
            reason = _validate_record(rec)
            if reason is not None:
                rejections.append({"index": idx, "reason": reason})
                continue
            rec = dict(rec)
            rec.setdefault("rating_id", f"r{self._seq + accepted + 1:06d}")
            rec["v"] = 1
            rec["kind"] = "rating"
            rec.setdefault("timestamp", float(self._seq + accepted + 1))
            line = json.dumps(
                self._normalize(rec), sort_keys=True, separators=(",", ":")
            )
            accepted_lines.append(line)
            accepted += 1
        if accepted_lines:
            batch = "\n".join(accepted_lines)
            digest = hashlib.sha256(batch.encode()).hexdigest()
            trailer = json.dumps(
                {"v": 1, "kind": "checksum", "count": accepted, "sha256": digest},
                sort_keys=True,
                separators=(",", ":"),
            )
            with self.path.open("a") as f:
                f.write(batch + "\n" + trailer + "\n")
            for line in accepted_lines:
                self._append_memory(json.loads(line))
        return IngestResult(accepted, rejections)

    @staticmethod
    def _normalize(rec: dict) -> dict:
        return {
            "v": 1,
            "kind": "rating",
            "rating_id": rec["rating_id"],
            "item_id": rec["item_id"],
            "rater_id": rec["rater_id"],
            "scores": rec["scores"],
            "tags": list(rec.get("tags", [])),
            "comment": rec.get("comment"),
            "timestamp": rec["timestamp"],
            "population": rec.get("population"),
        }

    def effective_ratings(self) -> list[HumanRating]:
        """Non-superseded view: latest value per (item, rater, dimension)."""
        latest: dict[tuple[str, str, str], tuple[int, HumanRating]] = {}
        tag_latest: dict[tuple[str, str], tuple[int, HumanRating]] = {}
        for seq, r in enumerate(self._ratings):
            for dim in r.scores:
                latest[(r.item_id, r.rater_id, dim)] = (seq, r)
            tag_latest[(r.item_id, r.rater_id)] = (seq, r)
        # rebuild one effective rating per (item, rater)
        merged: dict[tuple[str, str], dict] = {}
        for (item, rater, dim), (seq, r) in latest.items():
            slot = merged.setdefault(
                (item, rater), {"scores": {}, "seq": -1, "rating": r}
            )
            slot["scores"][dim] = r.scores[dim]
            if seq > slot["seq"]:
                slot["seq"] = seq
                slot["rating"] = r
        out: list[HumanRating] = []
        for (item, rater), slot in sorted(merged.items()):
            base = tag_latest[(item, rater)][1]
            out.append(
                HumanRating(
                    rating_id=slot["rating"].rating_id,
                    item_id=item,
                    rater_id=rater,
                    scores=slot["scores"],
                    tags=base.tags,
                    comment=base.comment,
                    timestamp=slot["rating"].timestamp,
                    population=base.population,
                )
            )
        return out

    def has_rated(self, item_id: str, rater_id: str) -> bool:
        return any(
            r.item_id == item_id and r.rater_id == rater_id for r in self._ratings
        )

    def rating_counts(self) -> Counter:
        """Effective rating count per item (one per rater)."""
        counts: Counter = Counter()
        for r in self.effective_ratings():
            counts[r.item_id] += 1
        return counts

    def aggregate(self, item_id: str) -> AggregatedRating:
        ratings = [r for r in self.effective_ratings() if r.item_id == item_id]
        if not ratings:
            raise NoFeedbackError("no_feedback")
        mean: dict[str, float] = {}
        median: dict[str, float] = {}
        count: dict[str, int] = {}
        norm: dict[str, float] = {}
        for dim in DIMENSIONS:
            values = [r.scores[dim] for r in ratings if dim in r.scores]
            if not values:
                continue
            mean[dim] = sum(values) / len(values)
            median[dim] = float(statistics.median(values))
            count[dim] = len(values)
            norm[dim] = (mean[dim] - 1.0) / 4.0
        tags = Counter(tag for r in ratings for tag in r.tags)
        return AggregatedRating(item_id, mean, median, count, norm, dict(tags))

    def aggregate_all(self) -> dict[str, AggregatedRating]:
        items = sorted({r.item_id for r in self.effective_ratings()})
        return {item: self.aggregate(item) for item in items}

    def agreement(self, dimension: str) -> AgreementReport:
        """Krippendorff's alpha with the interval metric, missing cells allowed."""
        if dimension not in DIMENSIONS:
            raise ValueError(f"unknown dimension: {dimension}")
        units: dict[str, dict[str, int]] = {}
        for r in self.effective_ratings():
            if dimension in r.scores:
                units.setdefault(r.item_id, {})[r.rater_id] = r.scores[dimension]
        pairable = {item: vals for item, vals in units.items() if len(vals) >= 2}
        raters = {rater for vals in units.values() for rater in vals}
        if not pairable or len(raters) < 2:
            raise InsufficientOverlapError("insufficient_overlap")

        values = [v for vals in pairable.values() for v in vals.values()]
        n = len(values)
        d_o = 0.0
        for vals in pairable.values():
            vs = list(vals.values())
            m = len(vs)
            d_o += sum(
                (a - b) ** 2 for i, a in enumerate(vs) for b in vs[i + 1 :]
            ) * 2.0 / (m - 1)
        d_o /= n
        d_e = sum(
            (a - b) ** 2 for i, a in enumerate(values) for b in values[i + 1 :]
        ) * 2.0 / (n * (n - 1))
        alpha = 1.0 if d_e == 0.0 else 1.0 - d_o / d_e
        return AgreementReport(dimension, alpha, len(raters), len(units))

    def export_rows(self, since: float = 0.0) -> list[dict]:
        """CalibrationSet-ready aggregates for items rated at or after ``since``."""
        recent = {
            r.item_id for r in self.effective_ratings() if r.timestamp >= since
        }
        rows = []
        for item in sorted(recent):
            agg = self.aggregate(item)
            rows.append(
                {
                    "v": 1,
                    "item_id": item,
                    "human": agg.normalized_mean,
                    "count": agg.count,
                    "tag_histogram": agg.tag_histogram,
                }
            )
        return rows
