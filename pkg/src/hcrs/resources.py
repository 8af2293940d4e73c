"""Loaders for the lexicon pack, gazetteer and embedding table.

All three are plain-text formats so users can audit and extend them:
  * lexicon pack: directory of ``<category>.txt`` files, one lowercase
    phrase (1-4 tokens) per line, ``#`` comments allowed;
  * gazetteer: tab-separated ``surface<TAB>category`` lines;
  * embeddings: header line ``vocab_size dimension`` then
    ``token v1 ... vD`` rows.

Loaded packs are immutable and safe to share across threads. A starter
pack for English health text ships with the package.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from importlib import resources as importlib_resources
from pathlib import Path

import numpy as np

__all__ = [
    "ResourceError",
    "LexiconPack",
    "Gazetteer",
    "EmbeddingTable",
    "ResourcePack",
    "default_resources",
    "default_data_path",
    "LEXICON_CATEGORIES",
    "GAZETTEER_CATEGORIES",
]


class ResourceError(ValueError):
    """Malformed or missing resource file."""


LEXICON_CATEGORIES = (
    "hedges",
    "mitigators",
    "intensifiers",
    "modals_directive",
    "evidentials",
    "npi_terms",
    "empathy_terms",
    "positive_terms",
    "negative_terms",
    "trust_attribution_cues",
    "institutional_terms",
    "transparency_cues",
    "idioms",
    "jargon_terms",
    "temporal_cues",
    "procedural_cues",
    "imperative_verbs",
)

GAZETTEER_CATEGORIES = ("organization", "person-title", "place", "cultural-practice")


def _checksum(paths: list[Path]) -> str:
    h = hashlib.sha256()
    for p in sorted(paths):
        h.update(p.name.encode())
        h.update(p.read_bytes())
    return h.hexdigest()[:16]


@dataclass(frozen=True)
class LexiconPack:
    categories: dict[str, frozenset[tuple[str, ...]]]
    checksum: str

    def phrases(self, category: str) -> frozenset[tuple[str, ...]]:
        try:
            return self.categories[category]
        except KeyError:
            raise ResourceError(f"missing lexicon category: {category}") from None

    @classmethod
    def load(cls, directory: str | Path) -> "LexiconPack":
        directory = Path(directory)
        files = sorted(directory.glob("*.txt"))
        if not files:
            raise ResourceError(f"no lexicon files in {directory}")
        categories: dict[str, frozenset[tuple[str, ...]]] = {}
        for f in files:
            phrases: set[tuple[str, ...]] = set()
            for lineno, line in enumerate(f.read_text().splitlines(), 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if line != line.lower():
                    raise ResourceError(f"{f.name}:{lineno}: entries must be lowercase")
                parts = tuple(line.split())
                if not 1 <= len(parts) <= 4:
                    raise ResourceError(f"{f.name}:{lineno}: phrases are 1-4 tokens")
                phrases.add(parts)
            categories[f.stem] = frozenset(phrases)
        return cls(categories, _checksum(files))


@dataclass(frozen=True)
class Gazetteer:
    entries: dict[str, dict[tuple[str, ...], str]]  # category -> phrase -> surface
    checksum: str

    def surfaces(self, category: str) -> dict[tuple[str, ...], str]:
        return self.entries.get(category, {})

    def all_phrases(self) -> dict[tuple[str, ...], str]:
        """phrase -> category over every category."""
        out: dict[tuple[str, ...], str] = {}
        for cat, phrases in self.entries.items():
            for p in phrases:
                out[p] = cat
        return out

    @classmethod
    def load(cls, path: str | Path) -> "Gazetteer":
        path = Path(path)
        entries: dict[str, dict[tuple[str, ...], str]] = {}
        for lineno, line in enumerate(path.read_text().splitlines(), 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ResourceError(f"{path.name}:{lineno}: expected surface<TAB>category")
            surface, category = parts
            key = tuple(surface.lower().split())
            bucket = entries.setdefault(category, {})
            if key in bucket:
                raise ResourceError(f"{path.name}:{lineno}: duplicate surface {surface!r}")
            bucket[key] = surface
        return cls(entries, _checksum([path]))


@dataclass(frozen=True)
class EmbeddingTable:
    vectors: dict[str, np.ndarray]
    dimension: int
    checksum: str

    def get(self, token: str) -> np.ndarray | None:
        return self.vectors.get(token)

    @classmethod
    def load(cls, path: str | Path) -> "EmbeddingTable":
        path = Path(path)
        lines = path.read_text().splitlines()
        if not lines:
            raise ResourceError(f"{path.name}: empty embedding file")
        header = lines[0].split()
        if len(header) != 2:
            raise ResourceError(f"{path.name}: header must be 'vocab_size dimension'")
        vocab_size, dim = int(header[0]), int(header[1])
        vectors: dict[str, np.ndarray] = {}
        for lineno, line in enumerate(lines[1:], 2):
            if not line.strip():
                continue
            parts = line.split()
            token, values = parts[0], parts[1:]
            if len(values) != dim:
                raise ResourceError(
                    f"{path.name}:{lineno}: expected dimension {dim}, got {len(values)}"
                )
            if token in vectors:
                raise ResourceError(f"{path.name}:{lineno}: duplicate token {token!r}")
            vectors[token] = np.array([float(v) for v in values], dtype=float)
        if len(vectors) != vocab_size:
            raise ResourceError(
                f"{path.name}: header says {vocab_size} tokens, found {len(vectors)}"
            )
        return cls(vectors, dim, _checksum([path]))


@dataclass(frozen=True)
class ResourcePack:
    lexicons: LexiconPack
    gazetteer: Gazetteer
    embeddings: EmbeddingTable
    x_ref: float = 5.0  # saturation rate, hits per 100 words

    @property
    def checksums(self) -> dict[str, str]:
        return {
            "lexicons": self.lexicons.checksum,
            "gazetteer": self.gazetteer.checksum,
            "embeddings": self.embeddings.checksum,
        }

    @classmethod
    def load(
        cls,
        lexicon_dir: str | Path,
        gazetteer_path: str | Path,
        embeddings_path: str | Path,
        x_ref: float = 5.0,
    ) -> "ResourcePack":
        return cls(
            LexiconPack.load(lexicon_dir),
            Gazetteer.load(gazetteer_path),
            EmbeddingTable.load(embeddings_path),
            x_ref,
        )


def default_data_path() -> Path:
    return Path(importlib_resources.files("hcrs") / "data")


def default_resources(x_ref: float = 5.0) -> ResourcePack:
    """Load the starter resource pack bundled with the package."""
    data = default_data_path()
    return ResourcePack.load(
        data / "lexicons", data / "gazetteer.tsv", data / "embeddings.txt", x_ref
    )
