"""Hybrid dimension scores and the composite HCRS.

Each dimension is a convex combination of its automatic features and an
optional normalized human rating. Weights are non-negative and sum to one
per group, which keeps every score in [0,1]. When no human rating is
available the automatic weights are renormalized (never imputed) and the
report carries a ``no_human`` flag.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .features import (
    DIMENSIONS,
    ActionFeatures,
    ClarityFeatures,
    CultureFeatures,
    FeatureBundle,
    ToneFeatures,
    TrustFeatures,
)

__all__ = [
    "WeightSet",
    "DimensionScore",
    "HCRSReport",
    "normalize_likert",
    "tone_score",
    "culture_score",
    "action_score",
    "clarity_score",
    "trust_score",
    "composite_hcrs",
    "score_bundle",
]

_TOL = 1e-9

_GROUP_SIZES = {
    "tone": 3,
    "culture": 3,
    "actionability": 3,
    "clarity": 3,
    "trustworthiness": 4,
}

_COMPONENT_NAMES = {
    "tone": ("politeness", "sentiment", "empathy"),
    "culture": ("entity_match", "idiom_match", "embedding_similarity"),
    "actionability": ("directive", "procedural", "action_entities"),
    "clarity": ("readability_norm", "jargon_penalty", "cohesion"),
    "trustworthiness": ("attribution", "institutional", "transparency", "authority"),
}


def _validate_group(name: str, auto: tuple[float, ...], human: float) -> None:
    values = (*auto, human)
    if any(v < 0 for v in values):
        raise ValueError(f"{name}: weights must be non-negative")
    if abs(sum(values) - 1.0) > _TOL:
        raise ValueError(f"{name}: weights must sum to 1, got {sum(values)}")


@dataclass(frozen=True)
class WeightSet:
    """All hybrid coefficients, grouped per dimension, plus composite weights."""

    tone: tuple[float, ...] = (0.25, 0.25, 0.25)
    tone_human: float = 0.25
    culture: tuple[float, ...] = (0.25, 0.25, 0.25)
    culture_human: float = 0.25
    actionability: tuple[float, ...] = (0.25, 0.25, 0.25)
    actionability_human: float = 0.25
    clarity: tuple[float, ...] = (0.25, 0.25, 0.25)
    clarity_human: float = 0.25
    trustworthiness: tuple[float, ...] = (0.2, 0.2, 0.2, 0.2)
    trustworthiness_human: float = 0.2
    composite: dict[str, float] = field(
        default_factory=lambda: {d: 0.2 for d in DIMENSIONS}
    )

    def __post_init__(self) -> None:
        for dim, size in _GROUP_SIZES.items():
            auto = self.auto_weights(dim)
            if len(auto) != size:
                raise ValueError(f"{dim}: expected {size} automatic weights")
            _validate_group(dim, auto, self.human_weight(dim))
        comp = [self.composite.get(d, -1.0) for d in DIMENSIONS]
        if any(w < 0 for w in comp) or abs(sum(comp) - 1.0) > _TOL:
            raise ValueError("composite weights must be non-negative and sum to 1")

    def auto_weights(self, dimension: str) -> tuple[float, ...]:
        return getattr(self, dimension)

    def human_weight(self, dimension: str) -> float:
        return getattr(self, f"{dimension}_human")

    def to_json(self) -> dict:
        doc = {"v": 1, "composite": {d: self.composite[d] for d in DIMENSIONS}}
        for dim in DIMENSIONS:
            doc[dim] = {
                "auto": list(self.auto_weights(dim)),
                "human": self.human_weight(dim),
            }
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "WeightSet":
        kwargs: dict = {}
        for dim in DIMENSIONS:
            group = doc[dim]
            kwargs[dim] = tuple(float(x) for x in group["auto"])
            kwargs[f"{dim}_human"] = float(group["human"])
        kwargs["composite"] = {d: float(w) for d, w in doc["composite"].items()}
        return cls(**kwargs)

    @property
    def weightset_id(self) -> str:
        canon = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()[:16]


def normalize_likert(h: float) -> float:
    """Map a Likert rating (or mean of ratings) from [1,5] to [0,1]."""
    if not 1.0 <= h <= 5.0:
        raise ValueError(f"likert value out of range [1,5]: {h}")
    return (h - 1.0) / 4.0


@dataclass(frozen=True)
class DimensionScore:
    dimension: str
    components: dict[str, tuple[float, float]]  # name -> (value, weight used)
    human: float | None
    human_weight: float
    value: float
    flags: frozenset[str] = frozenset()


def _hybrid(
    dimension: str,
    values: list[float],
    human: float | None,
    weights: WeightSet,
    flags: frozenset[str] = frozenset(),
) -> DimensionScore:
    auto_w = weights.auto_weights(dimension)
    human_w = weights.human_weight(dimension)
    names = _COMPONENT_NAMES[dimension]
    for v in values:
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{dimension}: feature out of [0,1]: {v}")
    if human is None:
        auto_sum = sum(auto_w)
        if auto_sum <= 0:
            raise ValueError(
                f"{dimension}: no human rating and zero automatic weight mass"
            )
        used = tuple(w / auto_sum for w in auto_w)
        value = sum(w * v for w, v in zip(used, values))
        flags = flags | {"no_human"}
        human_used = 0.0
    else:
        if not 0.0 <= human <= 1.0:
            raise ValueError(f"{dimension}: human component out of [0,1]: {human}")
        used = auto_w
        human_used = human_w
        value = sum(w * v for w, v in zip(used, values)) + human_w * human
    components = {n: (v, w) for n, v, w in zip(names, values, used)}
    return DimensionScore(dimension, components, human, human_used, value, flags)


def tone_score(f: ToneFeatures, h: float | None, w: WeightSet) -> DimensionScore:
    return _hybrid("tone", f.vector(), h, w)


def culture_score(f: CultureFeatures, h: float | None, w: WeightSet) -> DimensionScore:
    return _hybrid("culture", f.vector(), h, w, f.flags)


def action_score(f: ActionFeatures, h: float | None, w: WeightSet) -> DimensionScore:
    return _hybrid("actionability", f.vector(), h, w)


def clarity_score(f: ClarityFeatures, h: float | None, w: WeightSet) -> DimensionScore:
    return _hybrid("clarity", f.vector(), h, w, f.flags)


def trust_score(f: TrustFeatures, h: float | None, w: WeightSet) -> DimensionScore:
    return _hybrid("trustworthiness", f.vector(), h, w)


@dataclass(frozen=True)
class HCRSReport:
    item_id: str
    dimensions: dict[str, DimensionScore]
    composite: float
    weightset_id: str
    resource_checksums: dict[str, str]

    def to_json(self) -> dict:
        return {
            "v": 1,
            "item_id": self.item_id,
            "composite": self.composite,
            "weightset_id": self.weightset_id,
            "resource_checksums": self.resource_checksums,
            "dimensions": {
                d: {
                    "value": s.value,
                    "human": s.human,
                    "human_weight": s.human_weight,
                    "components": {
                        n: {"value": v, "weight": w}
                        for n, (v, w) in s.components.items()
                    },
                    "flags": sorted(s.flags),
                }
                for d, s in self.dimensions.items()
            },
        }


def composite_hcrs(
    scores: dict[str, DimensionScore],
    w: WeightSet,
    item_id: str = "",
    resource_checksums: dict[str, str] | None = None,
) -> HCRSReport:
    """Convex combination of the five dimension scores."""
    missing = [d for d in DIMENSIONS if d not in scores]
    if missing:
        raise ValueError(f"missing dimensions: {missing}")
    composite = sum(w.composite[d] * scores[d].value for d in DIMENSIONS)
    return HCRSReport(
        item_id, dict(scores), composite, w.weightset_id, resource_checksums or {}
    )


def score_bundle(
    bundle: FeatureBundle,
    weights: WeightSet,
    human: dict[str, float] | None = None,
    item_id: str = "",
    resource_checksums: dict[str, str] | None = None,
) -> HCRSReport:
    """Score one feature bundle; ``human`` maps dimension -> [0,1] rating."""
    human = human or {}
    scores = {
        "tone": tone_score(bundle.tone, human.get("tone"), weights),
        "culture": culture_score(bundle.culture, human.get("culture"), weights),
        "actionability": action_score(bundle.action, human.get("actionability"), weights),
        "clarity": clarity_score(bundle.clarity, human.get("clarity"), weights),
        "trustworthiness": trust_score(
            bundle.trust, human.get("trustworthiness"), weights
        ),
    }
    return composite_hcrs(scores, weights, item_id, resource_checksums)
