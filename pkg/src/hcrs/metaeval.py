"""Metric-vs-human correlation tables.

Builds a per-item matrix of every in-scope metric (classic indices, BLEU,
SARI, the five automatic HCRS dimension scores and the composite, plus
optional externally supplied columns) and correlates each column with
each aggregated human dimension. Grade-level columns are sign-flipped
before best-metric selection since lower grades mean simpler text.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .calibration import pearson, spearman
from .corpus import SimplificationItem
from .features import DIMENSIONS, extract_all
from .metrics import bleu, coleman_liau, fkgl, sari, smog
from .resources import ResourcePack
from .scoring import WeightSet, score_bundle
from .textcore import analyze

__all__ = ["MetricMatrix", "CorrelationCell", "CorrelationTable", "build_matrix", "correlate"]

CLASSIC_METRICS = ("FKGL", "SMOG", "CLI", "BLEU", "SARI")
GRADE_METRICS = frozenset({"FKGL", "SMOG", "CLI"})


@dataclass(frozen=True)
class MetricMatrix:
    item_ids: tuple[str, ...]
    columns: dict[str, np.ndarray]
    provenance: dict[str, str]
    orientation: dict[str, str]  # column -> "higher-is-better" | "lower-is-simpler"


@dataclass(frozen=True)
class CorrelationCell:
    pearson_r: float | None
    spearman_rho: float | None
    n: int
    reason: str | None = None  # set when the cell is undefined


@dataclass(frozen=True)
class CorrelationTable:
    cells: dict[tuple[str, str], CorrelationCell]  # (metric, dimension) -> cell
    metrics: tuple[str, ...]
    dimensions: tuple[str, ...]
    best_standalone: dict[str, str | None]  # dimension -> metric name
    composite_delta: dict[str, float | None] = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["metric", "dimension", "pearson_r", "spearman_rho", "n", "reason"])
        for metric in self.metrics:
            for dim in self.dimensions:
                c = self.cells[(metric, dim)]
                w.writerow(
                    [metric, dim, c.pearson_r, c.spearman_rho, c.n, c.reason or ""]
                )
        return buf.getvalue()

    def to_long_csv(self) -> str:
        """Plot-ready long format: one statistic per row."""
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["metric", "dimension", "statistic", "value", "n"])
        for (metric, dim), c in sorted(self.cells.items()):
            if c.pearson_r is not None:
                w.writerow([metric, dim, "pearson", c.pearson_r, c.n])
            if c.spearman_rho is not None:
                w.writerow([metric, dim, "spearman", c.spearman_rho, c.n])
        return buf.getvalue()

    def to_text(self) -> str:
        width = max(len(m) for m in self.metrics) + 2
        lines = ["metric".ljust(width) + "  ".join(d[:12].rjust(12) for d in self.dimensions)]
        for metric in self.metrics:
            cells = []
            for dim in self.dimensions:
                c = self.cells[(metric, dim)]
                if c.pearson_r is None:
                    cells.append("undef".rjust(12))
                else:
                    mark = "*" if self.best_standalone.get(dim) == metric else " "
                    cells.append(f"{c.pearson_r:+.3f}{mark}".rjust(12))
            lines.append(metric.ljust(width) + "  ".join(cells))
        lines.append("")
        lines.append("* best standalone metric per dimension (|r| after orientation flip)")
        for dim, delta in self.composite_delta.items():
            if delta is not None:
                lines.append(f"composite vs best standalone on {dim}: {delta:+.3f}")
        return "\n".join(lines) + "\n"


def build_matrix(
    items: list[SimplificationItem],
    pack: ResourcePack,
    weights: WeightSet,
    external_scores: dict[str, dict[str, float]] | None = None,
) -> MetricMatrix:
    """One row per item, one column per metric; externals merged by item id."""
    ids = tuple(item.item_id for item in items)
    cols: dict[str, list[float]] = {m: [] for m in CLASSIC_METRICS}
    for dim in DIMENSIONS:
        cols[f"hcrs_{dim}"] = []
    cols["hcrs_composite"] = []

    for item in items:
        src = analyze(item.source)
        out = analyze(item.output)
        refs = [analyze(r) for r in item.references]
        if not refs:
            raise ValueError(f"item {item.item_id}: references required for BLEU/SARI")
        cols["FKGL"].append(fkgl(out).value)
        cols["SMOG"].append(smog(out).value)
        cols["CLI"].append(coleman_liau(out).value)
        cols["BLEU"].append(bleu(out, refs).score)
        cols["SARI"].append(sari(src, out, refs).score)
        report = score_bundle(extract_all(src, out, pack), weights, human=None)
        for dim in DIMENSIONS:
            cols[f"hcrs_{dim}"].append(report.dimensions[dim].value)
        cols["hcrs_composite"].append(report.composite)

    provenance = {name: "computed" for name in cols}
    if external_scores:
        id_set = set(ids)
        for name, mapping in external_scores.items():
            unknown = sorted(set(mapping) - id_set)
            if unknown:
                raise ValueError(f"external column {name!r}: unknown item ids {unknown}")
            missing = sorted(id_set - set(mapping))
            if missing:
                raise ValueError(f"external column {name!r}: missing item ids {missing}")
            cols[name] = [mapping[i] for i in ids]
            provenance[name] = "external"

    orientation = {
        name: "lower-is-simpler" if name in GRADE_METRICS else "higher-is-better"
        for name in cols
    }
    return MetricMatrix(
        ids, {k: np.asarray(v, dtype=float) for k, v in cols.items()}, provenance, orientation
    )


def correlate(
    matrix: MetricMatrix, human: dict[str, dict[str, float]]
) -> CorrelationTable:
    """Correlate every metric column against every human dimension.

    ``human`` maps item id -> dimension -> normalized rating. Cells with
    fewer than 3 paired observations or zero variance are reported as
    undefined with a reason instead of being dropped.
    """
    metrics = tuple(matrix.columns)
    cells: dict[tuple[str, str], CorrelationCell] = {}
    best: dict[str, str | None] = {}
    delta: dict[str, float | None] = {}
    for dim in DIMENSIONS:
        paired_ids = [
            i for i in matrix.item_ids if i in human and dim in human[i]
        ]
        y = np.array([human[i][dim] for i in paired_ids])
        best_metric: str | None = None
        best_abs = -1.0
        for metric in metrics:
            col = matrix.columns[metric]
            x = np.array(
                [col[matrix.item_ids.index(i)] for i in paired_ids]
            )
            n = len(paired_ids)
            if n < 3:
                cells[(metric, dim)] = CorrelationCell(None, None, n, "too_few_pairs")
                continue
            sign = -1.0 if matrix.orientation[metric] == "lower-is-simpler" else 1.0
            try:
                r = pearson(sign * x, y)
                rho = spearman(sign * x, y)
            except ValueError:
                cells[(metric, dim)] = CorrelationCell(None, None, n, "zero_variance")
                continue
            cells[(metric, dim)] = CorrelationCell(r, rho, n)
            standalone = metric in CLASSIC_METRICS or matrix.provenance[metric] == "external"
            if standalone and r > best_abs:
                best_abs = r
                best_metric = metric
        best[dim] = best_metric
        comp = cells.get(("hcrs_composite", dim))
        if best_metric is not None and comp is not None and comp.pearson_r is not None:
            delta[dim] = comp.pearson_r - cells[(best_metric, dim)].pearson_r
        else:
            delta[dim] = None
    return CorrelationTable(cells, metrics, DIMENSIONS, best, delta)
