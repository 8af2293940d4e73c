"""Corpus records: one source text, one simplified output, optional references."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["SimplificationItem", "CorpusError", "read_corpus", "write_jsonl"]


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class SimplificationItem:
    item_id: str
    source: str
    output: str
    references: tuple[str, ...] = ()
    metadata: dict = field(default_factory=dict)

    @classmethod
    def from_json(cls, rec: dict) -> "SimplificationItem":
        try:
            return cls(
                item_id=str(rec["id"]),
                source=rec["source"],
                output=rec["output"],
                references=tuple(rec.get("references", [])),
                metadata=dict(rec.get("metadata", {})),
            )
        except KeyError as exc:
            raise CorpusError(f"corpus record missing field {exc}") from None

    def to_json(self) -> dict:
        return {
            "id": self.item_id,
            "source": self.source,
            "output": self.output,
            "references": list(self.references),
            "metadata": dict(self.metadata),
        }


def read_corpus(path: str | Path) -> list[SimplificationItem]:
    path = Path(path)
    items: list[SimplificationItem] = []
    seen: set[str] = set()
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"{path.name}:{lineno}: invalid JSON: {exc}") from None
        item = SimplificationItem.from_json(rec)
        if item.item_id in seen:
            raise CorpusError(f"{path.name}:{lineno}: duplicate id {item.item_id!r}")
        seen.add(item.item_id)
        items.append(item)
    if not items:
        raise CorpusError(f"{path.name}: empty corpus")
    return items


def write_jsonl(path: str | Path, records: list[dict]) -> None:
    Path(path).write_text(
        "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
    )
