"""End-to-end pipeline helpers: corpus scoring and weight recalibration.

This is the glue the CLI and HTTP service share: score items with the
active WeightSet, turn feedback-store exports into calibration sets, and
produce a recalibrated WeightSet whose per-dimension automatic weights
come from the fit while the human share of each group is preserved.
"""
from __future__ import annotations

import numpy as np

from .calibration import (
    CalibrationSet,
    DegenerateDataError,
    FitResult,
    MIN_ROWS_FLOOR,
    _fit_unchecked,
    cross_validate,
    fit_weights,
)
from .corpus import SimplificationItem
from .features import DIMENSIONS, FeatureBundle, extract_all
from .resources import ResourcePack
from .scoring import HCRSReport, WeightSet, score_bundle
from .textcore import analyze

__all__ = [
    "extract_item",
    "score_items",
    "build_calibration_set",
    "calibrate_weights",
]


def extract_item(item: SimplificationItem, pack: ResourcePack) -> FeatureBundle:
    return extract_all(analyze(item.source), analyze(item.output), pack)


def score_items(
    items: list[SimplificationItem],
    pack: ResourcePack,
    weights: WeightSet,
    human: dict[str, dict[str, float]] | None = None,
    auto_only: bool = False,
) -> list[HCRSReport]:
    """Score a corpus; ``human`` maps item id -> dimension -> [0,1] rating."""
    human = {} if (auto_only or human is None) else human
    reports = []
    for item in sorted(items, key=lambda i: i.item_id):
        bundle = extract_item(item, pack)
        reports.append(
            score_bundle(
                bundle,
                weights,
                human.get(item.item_id),
                item_id=item.item_id,
                resource_checksums=pack.checksums,
            )
        )
    return reports


def build_calibration_set(
    items: list[SimplificationItem],
    pack: ResourcePack,
    export_rows: list[dict],
) -> CalibrationSet:
    """Join feature bundles with exported human aggregates.

    Only items rated on all five dimensions become rows, so every
    dimension shares one design matrix index.
    """
    by_id = {item.item_id: item for item in items}
    rows = [
        r
        for r in export_rows
        if r["item_id"] in by_id and all(d in r["human"] for d in DIMENSIONS)
    ]
    if not rows:
        raise DegenerateDataError("no items with complete human ratings")
    ids = tuple(r["item_id"] for r in rows)
    bundles = {i: extract_item(by_id[i], pack) for i in ids}
    features = {
        dim: np.array([bundles[i].vector(dim) for i in ids]) for dim in DIMENSIONS
    }
    targets = {
        dim: np.array([r["human"][dim] for r in rows]) for dim in DIMENSIONS
    }
    return CalibrationSet(ids, features, targets)


def calibrate_weights(
    data: CalibrationSet,
    base: WeightSet,
    k: int = 5,
    seed: int = 42,
    min_rows: int | None = None,
) -> tuple[WeightSet, FitResult]:
    """Fit per-dimension automatic weights and composite weights.

    Each dimension's fitted simplex weights are scaled by (1 - human
    share) so the group still sums to one with the human coefficient kept
    from ``base``. Composite weights are fitted by regressing the
    automatic dimension scores on the mean human rating across
    dimensions. ``min_rows`` relaxes the minimum-rows rule for small
    pilot runs; the simplex constraint keeps the fit well-posed even when
    rows are scarce, though the solution may then track noise.
    """
    n = len(data.item_ids)
    fit_fn = fit_weights
    if min_rows is not None:
        def fit_fn(x, y):  # noqa: E731 - scoped relaxation
            floor = max(min_rows, 2)
            if x.shape[0] < floor:
                raise DegenerateDataError(
                    f"need at least {floor} rows, got {x.shape[0]}"
                )
            return _fit_unchecked(x, y)

    k = min(k, n)
    result = None
    if min_rows is None:
        result = cross_validate(data, k, seed)
        auto_fits = result.weights
    else:
        auto_fits = {
            dim: fit_fn(data.features[dim], data.targets[dim]) for dim in DIMENSIONS
        }

    kwargs: dict = {}
    for dim in DIMENSIONS:
        human_w = base.human_weight(dim)
        kwargs[dim] = tuple(float(w) * (1.0 - human_w) for w in auto_fits[dim])
        kwargs[f"{dim}_human"] = human_w

    # composite: regress auto-only dimension scores on the mean human rating
    dim_scores = np.column_stack(
        [data.features[dim] @ auto_fits[dim] for dim in DIMENSIONS]
    )
    overall = np.mean(
        np.column_stack([data.targets[dim] for dim in DIMENSIONS]), axis=1
    )
    comp = fit_fn(dim_scores, overall)
    kwargs["composite"] = {d: float(w) for d, w in zip(DIMENSIONS, comp)}
    weights = WeightSet(**kwargs)

    if result is None:
        rmse = {
            dim: float(
                np.sqrt(
                    np.mean((data.features[dim] @ auto_fits[dim] - data.targets[dim]) ** 2)
                )
            )
            for dim in DIMENSIONS
        }
        result = FitResult(auto_fits, rmse, {}, {}, 0)
    return weights, result
