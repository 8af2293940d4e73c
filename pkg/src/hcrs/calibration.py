"""Weight calibration against aggregated human ratings.

Each dimension's coefficients are fitted by least squares constrained to
the probability simplex (w >= 0, sum w = 1), solved with projected
gradient descent. The simplex constraint is what keeps hybrid scores
bounded, so the solver never relaxes it. Alignment is reported as
held-out Pearson/Spearman correlation from seeded k-fold splits.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "CalibrationSet",
    "FitResult",
    "DegenerateDataError",
    "project_simplex",
    "fit_weights",
    "cross_validate",
    "pearson",
    "spearman",
    "MIN_ROWS_FLOOR",
]

MIN_ROWS_FLOOR = 10
_MAX_ITER = 10_000
_OBJ_TOL = 1e-9


class DegenerateDataError(ValueError):
    """Calibration data cannot identify the weights."""


@dataclass(frozen=True)
class CalibrationSet:
    """Per-dimension design matrices and targets, all values in [0,1]."""

    item_ids: tuple[str, ...]
    features: dict[str, np.ndarray]  # dimension -> (n_items, n_features)
    targets: dict[str, np.ndarray]  # dimension -> (n_items,)

    def __post_init__(self) -> None:
        n = len(self.item_ids)
        for dim, x in self.features.items():
            y = self.targets[dim]
            if x.shape[0] != n or y.shape[0] != n:
                raise ValueError(f"{dim}: row count mismatch")
            if np.any(x < -1e-12) or np.any(x > 1 + 1e-12):
                raise ValueError(f"{dim}: features must lie in [0,1]")
            if np.any(y < -1e-12) or np.any(y > 1 + 1e-12):
                raise ValueError(f"{dim}: targets must lie in [0,1]")


@dataclass(frozen=True)
class FitResult:
    weights: dict[str, np.ndarray]
    train_rmse: dict[str, float]
    holdout_pearson: dict[str, float]
    holdout_spearman: dict[str, float]
    folds: int

    def to_json(self) -> dict:
        return {
            "v": 1,
            "folds": self.folds,
            "weights": {d: list(map(float, w)) for d, w in self.weights.items()},
            "train_rmse": {d: float(v) for d, v in self.train_rmse.items()},
            "holdout_pearson": {d: float(v) for d, v in self.holdout_pearson.items()},
            "holdout_spearman": {d: float(v) for d, v in self.holdout_spearman.items()},
        }


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, len(v) + 1)
    rho = np.nonzero(u - css / idx > 0)[0][-1]
    theta = css[rho] / (rho + 1)
    return np.maximum(v - theta, 0.0)


def _min_rows(n_features: int) -> int:
    return max(MIN_ROWS_FLOOR, 2 * n_features)


def _refine_on_support(x: np.ndarray, y: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Solve the sum-to-one equality problem exactly on the active support.

    Projected gradient identifies the support; the KKT system then gives
    the exact minimizer there, which recovers planted weights to solver
    precision instead of first-order precision.
    """
    support = np.nonzero(w > 1e-12)[0]
    if len(support) == 0:
        return w
    xs = x[:, support]
    k = len(support)
    kkt = np.zeros((k + 1, k + 1))
    kkt[:k, :k] = 2.0 * xs.T @ xs
    kkt[:k, k] = 1.0
    kkt[k, :k] = 1.0
    rhs = np.concatenate([2.0 * xs.T @ y, [1.0]])
    sol, *_ = np.linalg.lstsq(kkt, rhs, rcond=None)
    ws = sol[:k]
    if np.any(ws < -1e-10):
        return w
    ws = np.maximum(ws, 0.0)
    total = ws.sum()
    if not np.isfinite(total) or total <= 0:
        return w
    ws = ws / total
    refined = np.zeros_like(w)
    refined[support] = ws
    old = float(np.sum((x @ w - y) ** 2))
    new = float(np.sum((x @ refined - y) ** 2))
    return refined if new <= old + 1e-12 else w


def _fit_unchecked(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    n, k = x.shape
    variances = x.var(axis=0)
    if np.all(variances < 1e-15):
        raise DegenerateDataError(
            "all feature columns are constant: " + ", ".join(map(str, range(k)))
        )
    w = np.full(k, 1.0 / k)
    lipschitz = 2.0 * float(np.linalg.norm(x, 2) ** 2)
    step = 1.0 / lipschitz if lipschitz > 0 else 1.0
    obj = float(np.sum((x @ w - y) ** 2))
    for _ in range(_MAX_ITER):
        grad = 2.0 * x.T @ (x @ w - y)
        w_new = project_simplex(w - step * grad)
        obj_new = float(np.sum((x @ w_new - y) ** 2))
        if obj_new > obj:  # safeguard; fixed step should not overshoot
            break
        w = w_new
        if obj - obj_new < _OBJ_TOL:
            obj = obj_new
            break
        obj = obj_new
    return _refine_on_support(x, y, w)


def fit_weights(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """min ||Xw - y||^2 subject to w >= 0, sum(w) = 1.

    Projected gradient from the uniform start with a fixed step from the
    Lipschitz constant, followed by an exact solve on the identified
    support. Deterministic and monotone in the objective.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n, k = x.shape
    if n < _min_rows(k):
        raise DegenerateDataError(
            f"need at least {_min_rows(k)} rows to fit {k} weights, got {n}"
        )
    return _fit_unchecked(x, y)


def pearson(xs, ys) -> float:
    """Product-moment correlation; errors on zero variance."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 3:
        raise ValueError("need two equal-length vectors of length >= 3")
    xc = x - x.mean()
    yc = y - y.mean()
    sx = float(np.sqrt(np.sum(xc**2)))
    sy = float(np.sqrt(np.sum(yc**2)))
    if sx == 0.0 or sy == 0.0:
        raise ValueError("undefined correlation: zero variance")
    return float(np.dot(xc, yc) / (sx * sy))


def _average_ranks(x: np.ndarray) -> np.ndarray:
    order = np.argsort(x, kind="stable")
    ranks = np.empty(len(x), dtype=float)
    i = 0
    sorted_x = x[order]
    while i < len(x):
        j = i
        while j + 1 < len(x) and sorted_x[j + 1] == sorted_x[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(xs, ys) -> float:
    """Pearson correlation on average ranks (ties get average ranks)."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 3:
        raise ValueError("need two equal-length vectors of length >= 3")
    return pearson(_average_ranks(x), _average_ranks(y))


def cross_validate(data: CalibrationSet, k: int, seed: int = 42) -> FitResult:
    """Seeded k-fold fit with held-out correlation per dimension.

    The reported weights are fitted on the full data; fold metrics
    quantify generalization. Held-out correlations are computed over the
    pooled out-of-fold predictions so leave-one-out remains defined.
    """
    n = len(data.item_ids)
    if not 2 <= k <= n:
        raise ValueError(f"k must be in [2, {n}], got {k}")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    folds = np.array_split(order, k)

    weights: dict[str, np.ndarray] = {}
    rmse: dict[str, float] = {}
    pear: dict[str, float] = {}
    spear: dict[str, float] = {}
    for dim, x in data.features.items():
        y = data.targets[dim]
        w_full = fit_weights(x, y)
        weights[dim] = w_full
        rmse[dim] = float(np.sqrt(np.mean((x @ w_full - y) ** 2)))
        preds = np.empty(n)
        for fold in folds:
            mask = np.ones(n, dtype=bool)
            mask[fold] = False
            # fold fits skip the minimum-rows gate; the full fit enforced it
            w_fold = _fit_unchecked(x[mask], y[mask])
            preds[fold] = x[fold] @ w_fold
        pear[dim] = pearson(preds, y)
        spear[dim] = spearman(preds, y)
    return FitResult(weights, rmse, pear, spear, k)
