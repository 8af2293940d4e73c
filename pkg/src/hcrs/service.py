"""HTTP API for the human-in-the-loop evaluation cycle.

Serves corpus items as micro-survey tasks, accepts Likert ratings
(durable in the append log before the ack), and exposes scores,
correlations and an explicit operator-triggered calibration that swaps
the active WeightSet. Score responses are pure functions of (item,
resources, active weightset), so repeated reads between calibrations are
byte-identical; human influence enters only through recalibration.

No authentication in v1: the rater token is a pseudonymous, client-chosen
string. Do not expose this service publicly without an auth layer.
"""
from __future__ import annotations

import json
import threading
from pathlib import Path

from fastapi import FastAPI, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .config import RunConfig
from .corpus import SimplificationItem, read_corpus
from .engine import build_calibration_set, calibrate_weights, extract_item
from .feedback import FeedbackStore, InsufficientOverlapError, TAGS
from .features import DIMENSIONS
from .metaeval import build_matrix, correlate
from .scoring import WeightSet, score_bundle

__all__ = ["create_app"]


class _State:
    def __init__(self, cfg: RunConfig, corpus_path: str | None):
        self.cfg = cfg
        self.pack = cfg.load_resources()
        self.weights = WeightSet()
        if cfg.weights is not None:
            self.weights = WeightSet.from_json(json.loads(Path(cfg.weights).read_text()))
        self.store = FeedbackStore(cfg.store)
        self.items: dict[str, SimplificationItem] = {}
        if corpus_path:
            for item in read_corpus(corpus_path):
                self.items[item.item_id] = item
        self.prompts = json.loads(Path(cfg.prompts).read_text())
        self.calibrating = False
        self.lock = threading.Lock()


def _bad_request(reason: str) -> JSONResponse:
    return JSONResponse({"v": 1, "error": reason}, status_code=400)


def create_app(cfg: RunConfig | None = None, corpus_path: str | None = None) -> FastAPI:
    state = _State(cfg or RunConfig(), corpus_path)
    app = FastAPI(title="hcrs-service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],  # annotation UI origin; no credentials in v1
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.engine = state

    @app.get("/health")
    def health():
        return {
            "v": 1,
            "status": "ok",
            "items": len(state.items),
            "weightset_id": state.weights.weightset_id,
        }

    @app.post("/items")
    async def post_items(request: Request):
        try:
            payload = await request.json()
        except Exception:
            return _bad_request("invalid_json")
        records = payload.get("items") if isinstance(payload, dict) else None
        if not isinstance(records, list) or not records:
            return _bad_request("items_required")
        added = []
        for rec in records:
            try:
                item = SimplificationItem.from_json(rec)
            except ValueError:
                return _bad_request("invalid_item_record")
            state.items[item.item_id] = item
            added.append(item.item_id)
        return {"v": 1, "ids": added}

    @app.get("/items")
    def list_items():
        return {"v": 1, "ids": sorted(state.items)}

    @app.get("/items/{item_id}/score")
    def item_score(item_id: str):
        if state.calibrating:
            return JSONResponse({"v": 1, "error": "calibration_in_progress"}, status_code=503)
        item = state.items.get(item_id)
        if item is None:
            return JSONResponse({"v": 1, "error": "unknown_item"}, status_code=404)
        bundle = extract_item(item, state.pack)
        report = score_bundle(
            bundle,
            state.weights,
            human=None,
            item_id=item_id,
            resource_checksums=state.pack.checksums,
        )
        return report.to_json()

    @app.get("/items/{item_id}/aggregate")
    def item_aggregate(item_id: str):
        if item_id not in state.items:
            return JSONResponse({"v": 1, "error": "unknown_item"}, status_code=404)
        try:
            return state.store.aggregate(item_id).to_json()
        except KeyError:
            return JSONResponse({"v": 1, "error": "no_feedback"}, status_code=404)

    @app.get("/survey/next")
    def survey_next(rater: str = Query(...)):
        counts = state.store.rating_counts()
        candidates = [
            (counts.get(item_id, 0), item_id)
            for item_id in sorted(state.items)
            if not state.store.has_rated(item_id, rater)
        ]
        if not candidates:
            return Response(status_code=204)
        _, item_id = min(candidates)
        item = state.items[item_id]
        return {
            "v": 1,
            "task_id": f"{item_id}:{rater}",
            "item_id": item_id,
            "text": item.output,
            "source": item.source,
            "dimensions": list(DIMENSIONS),
            "tags": list(TAGS),
            "prompts": {d: state.prompts.get(d, d) for d in DIMENSIONS},
        }

    @app.post("/ratings")
    async def post_rating(request: Request):
        try:
            payload = await request.json()
        except Exception:
            return _bad_request("invalid_json")
        if not isinstance(payload, dict):
            return _bad_request("invalid_record")
        if payload.get("item_id") and payload["item_id"] not in state.items:
            return JSONResponse({"v": 1, "error": "unknown_item"}, status_code=404)
        superseded = bool(
            payload.get("item_id")
            and payload.get("rater_id")
            and state.store.has_rated(payload["item_id"], payload["rater_id"])
        )
        with state.lock:
            result = state.store.ingest([payload])
        if result.rejections:
            return _bad_request(result.rejections[0]["reason"])
        return {"v": 1, "accepted": 1, "superseded": superseded}

    @app.post("/calibrate")
    async def calibrate(request: Request):
        if state.calibrating:
            return JSONResponse({"v": 1, "error": "calibration_in_progress"}, status_code=503)
        try:
            body = await request.body()
            payload = json.loads(body) if body else {}
        except json.JSONDecodeError:
            return _bad_request("invalid_json")
        min_rows = payload.get("min_rows")
        folds = payload.get("folds", 5)
        state.calibrating = True
        try:
            with state.lock:
                rows = state.store.export_rows()
            data = build_calibration_set(list(state.items.values()), state.pack, rows)
            new_weights, result = calibrate_weights(
                data, state.weights, k=folds, seed=state.cfg.seed, min_rows=min_rows
            )
            state.weights = new_weights
        except ValueError as exc:
            return _bad_request(str(exc))
        finally:
            state.calibrating = False
        doc = result.to_json()
        doc["weightset"] = new_weights.to_json()
        doc["weightset_id"] = new_weights.weightset_id
        return doc

    @app.get("/correlations")
    def correlations():
        rows = state.store.export_rows()
        human = {row["item_id"]: row["human"] for row in rows}
        try:
            matrix = build_matrix(list(state.items.values()), state.pack, state.weights)
            table = correlate(matrix, human)
        except ValueError as exc:
            return _bad_request(str(exc))
        return {
            "v": 1,
            "cells": [
                {
                    "metric": metric,
                    "dimension": dim,
                    "pearson_r": cell.pearson_r,
                    "spearman_rho": cell.spearman_rho,
                    "n": cell.n,
                    "reason": cell.reason,
                }
                for (metric, dim), cell in sorted(table.cells.items())
            ],
            "best_standalone": table.best_standalone,
        }

    @app.get("/agreement/{dimension}")
    def agreement(dimension: str):
        try:
            rep = state.store.agreement(dimension)
        except InsufficientOverlapError:
            return _bad_request("insufficient_overlap")
        except ValueError as exc:
            return _bad_request(str(exc))
        return {
            "v": 1,
            "dimension": rep.dimension,
            "alpha": rep.alpha,
            "raters": rep.rater_count,
            "items": rep.item_count,
        }

    @app.get("/export")
    def export(since: float = 0.0):
        return {"v": 1, "rows": state.store.export_rows(since=since)}

    return app
