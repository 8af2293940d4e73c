"""Operator command line: score, calibrate, correlate, agreement, ratings, serve.

Exit codes: 0 success, 1 input error, 2 partial per-item failure,
64 usage error. Every command takes ``--config`` (flat key=value file)
and ``--seed``; flags win over config-file values.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import RunConfig
from .corpus import CorpusError, read_corpus, write_jsonl
from .engine import build_calibration_set, calibrate_weights, score_items
from .feedback import FeedbackStore, InsufficientOverlapError
from .metaeval import build_matrix, correlate
from .scoring import WeightSet

__all__ = ["main", "build_parser"]

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_PARTIAL = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # unknown flags and bad values are usage errors
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--seed", type=int, default=None, help="random seed (default 42)")
    p.add_argument("--x-ref", type=float, default=None, dest="x_ref",
                   help="cue-rate saturation point, hits per 100 words")
    p.add_argument("--lexicons", help="lexicon pack directory")
    p.add_argument("--gazetteer", help="gazetteer TSV file")
    p.add_argument("--embeddings", help="embedding table file")
    p.add_argument("--weights", help="WeightSet JSON file")


def build_parser() -> _Parser:
    parser = _Parser(prog="hcrs", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("score", help="score a corpus and emit HCRS reports")
    _add_common(p)
    p.add_argument("corpus", help="corpus JSONL: {id, source, output, references}")
    p.add_argument("--out", help="write report JSONL here (default stdout only summary)")
    p.add_argument("--ratings", help="feedback store to take human components from")
    p.add_argument("--auto-only", action="store_true",
                   help="ignore human ratings; renormalize automatic weights")

    p = sub.add_parser("calibrate", help="fit weights from a ratings export")
    _add_common(p)
    p.add_argument("corpus")
    p.add_argument("export", help="ratings export JSONL (see 'hcrs ratings export')")
    p.add_argument("--out", help="write FitResult JSON here")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--min-rows", type=int, default=None, dest="min_rows",
                   help="relax the minimum-rows rule for small pilots")

    p = sub.add_parser("correlate", help="metric-vs-human correlation table")
    _add_common(p)
    p.add_argument("corpus")
    p.add_argument("human", help="ratings export JSONL with per-dimension aggregates")
    p.add_argument("--external", help="external scores JSON: {column: {item_id: value}}")
    p.add_argument("--out-prefix", default="correlations",
                   help="prefix for <prefix>.csv and <prefix>_long.csv")

    p = sub.add_parser("agreement", help="Krippendorff alpha per dimension")
    _add_common(p)
    p.add_argument("store", help="feedback store JSONL")
    p.add_argument("--dimension", action="append", dest="dimensions",
                   help="dimension to report (repeatable; default all with data)")

    p = sub.add_parser("ratings", help="feedback store operations")
    _add_common(p)
    rsub = p.add_subparsers(dest="ratings_command", required=True, parser_class=_Parser)
    pe = rsub.add_parser("export", help="emit CalibrationSet-ready JSONL")
    pe.add_argument("store")
    pe.add_argument("--since", type=float, default=0.0, help="timestamp lower bound")
    pe.add_argument("--out", help="output path (default stdout)")
    pi = rsub.add_parser("ingest", help="append rating records from JSONL")
    pi.add_argument("store")
    pi.add_argument("records", help="JSONL of rating records")

    p = sub.add_parser("serve", help="run the micro-survey HTTP service")
    _add_common(p)
    p.add_argument("--corpus", help="corpus JSONL preloaded into the service")
    p.add_argument("--store", help="feedback store path")
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    overrides = {
        "seed": getattr(args, "seed", None),
        "x_ref": getattr(args, "x_ref", None),
        "lexicons": getattr(args, "lexicons", None),
        "gazetteer": getattr(args, "gazetteer", None),
        "embeddings": getattr(args, "embeddings", None),
        "weights": getattr(args, "weights", None),
        "store": getattr(args, "store", None),
        "serve_host": getattr(args, "host", None),
        "serve_port": getattr(args, "port", None),
    }
    return RunConfig.from_sources(getattr(args, "config", None), overrides)


def _load_weights(cfg: RunConfig) -> WeightSet:
    if cfg.weights is None:
        return WeightSet()
    return WeightSet.from_json(json.loads(Path(cfg.weights).read_text()))


def _human_from_store(path: str | None) -> dict[str, dict[str, float]]:
    if not path:
        return {}
    store = FeedbackStore(path)
    return {row["item_id"]: row["human"] for row in store.export_rows()}


def cmd_score(args) -> int:
    cfg = _config(args)
    try:
        items = read_corpus(args.corpus)
    except (OSError, CorpusError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    pack = cfg.load_resources()
    weights = _load_weights(cfg)
    human = _human_from_store(args.ratings)
    reports = []
    failures = []
    for item in sorted(items, key=lambda i: i.item_id):
        try:
            reports.extend(
                score_items([item], pack, weights, human, auto_only=args.auto_only)
            )
        except Exception as exc:  # item-level failure must not abort the run
            failures.append((item.item_id, str(exc)))
    if args.out:
        write_jsonl(args.out, [r.to_json() for r in reports])
    print(f"{'item':<12}{'composite':>10}  " + "  ".join(f"{d[:8]:>8}" for d in
          ("clarity", "trustwor", "tone", "culture", "actionab")))
    for r in reports:
        dims = "  ".join(
            f"{r.dimensions[d].value:8.3f}"
            for d in ("clarity", "trustworthiness", "tone", "culture", "actionability")
        )
        print(f"{r.item_id:<12}{r.composite:>10.3f}  {dims}")
    for item_id, msg in failures:
        print(f"FAILED {item_id}: {msg}", file=sys.stderr)
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_calibrate(args) -> int:
    cfg = _config(args)
    try:
        items = read_corpus(args.corpus)
        rows = [json.loads(l) for l in Path(args.export).read_text().splitlines() if l.strip()]
    except (OSError, CorpusError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    pack = cfg.load_resources()
    base = _load_weights(cfg)
    try:
        data = build_calibration_set(items, pack, rows)
        weights, result = calibrate_weights(
            data, base, k=args.folds, seed=cfg.seed, min_rows=args.min_rows
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    doc = result.to_json()
    doc["weightset"] = weights.to_json()
    doc["weightset_id"] = weights.weightset_id
    out = json.dumps(doc, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(out + "\n")
    print(out)
    return EXIT_OK


def cmd_correlate(args) -> int:
    cfg = _config(args)
    try:
        items = read_corpus(args.corpus)
        rows = [json.loads(l) for l in Path(args.human).read_text().splitlines() if l.strip()]
        external = None
        if args.external:
            external = json.loads(Path(args.external).read_text())
    except (OSError, CorpusError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    pack = cfg.load_resources()
    weights = _load_weights(cfg)
    human = {row["item_id"]: row["human"] for row in rows}
    try:
        matrix = build_matrix(items, pack, weights, external)
        table = correlate(matrix, human)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    Path(f"{args.out_prefix}.csv").write_text(table.to_csv())
    Path(f"{args.out_prefix}_long.csv").write_text(table.to_long_csv())
    print(table.to_text())
    return EXIT_OK


def cmd_agreement(args) -> int:
    cfg = _config(args)
    try:
        store = FeedbackStore(args.store)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    from .features import DIMENSIONS

    dims = args.dimensions or list(DIMENSIONS)
    reported = False
    for dim in dims:
        try:
            rep = store.agreement(dim)
        except InsufficientOverlapError:
            print(f"{dim}: insufficient_overlap")
            continue
        print(
            f"{dim}: alpha={rep.alpha:.4f} raters={rep.rater_count} items={rep.item_count}"
        )
        reported = True
    return EXIT_OK if reported else EXIT_INPUT


def cmd_ratings(args) -> int:
    if args.ratings_command == "export":
        try:
            store = FeedbackStore(args.store)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        rows = store.export_rows(since=args.since)
        text = "".join(json.dumps(r, sort_keys=True) + "\n" for r in rows)
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    if args.ratings_command == "ingest":
        try:
            records = [
                json.loads(l)
                for l in Path(args.records).read_text().splitlines()
                if l.strip()
            ]
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        store = FeedbackStore(args.store)
        result = store.ingest(records)
        print(f"accepted {result.accepted}, rejected {len(result.rejections)}")
        for rej in result.rejections:
            print(f"  record {rej['index']}: {rej['reason']}", file=sys.stderr)
        return EXIT_PARTIAL if result.rejections else EXIT_OK
    return EXIT_USAGE


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    cfg = _config(args)
    app = create_app(cfg, corpus_path=args.corpus)
    uvicorn.run(app, host=cfg.serve_host, port=cfg.serve_port, log_level="warning")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "score": cmd_score,
        "calibrate": cmd_calibrate,
        "correlate": cmd_correlate,
        "agreement": cmd_agreement,
        "ratings": cmd_ratings,
        "serve": cmd_serve,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
