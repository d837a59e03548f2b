"""Terminal entry point: list-metrics, manual eval, agentic eval, corpus tools, serve."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ragvue.engine import EngineConfig, evaluate, run_agentic
from ragvue.model import METRIC_NAMES, UnknownMetric, load_metrics
from ragvue.reports import (
    DatasetError,
    FORMATS,
    export_ragas_json,
    load_jsonl,
    write_report,
)
from ragvue.variants import EmptyFacts, build_corpus, load_source_records, write_jsonl

EXIT_OK = 0
EXIT_CASE_ERRORS = 1
EXIT_FATAL = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ragvue-cli",
        description="Reference-free, explainable evaluation of RAG (question, contexts, answer) data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list-metrics", help="List the available metrics")

    eval_p = sub.add_parser("eval", help="Manual evaluation with explicitly chosen metrics")
    eval_p.add_argument("--inputs", required=True, help="Path to the JSONL dataset")
    eval_p.add_argument("--metrics", required=True, help="Comma-separated metric names")
    eval_p.add_argument("--out-base", required=True, help="Output path base (extensions appended)")
    eval_p.add_argument("--format", default="json", help="Comma-separated subset of json,md,csv")
    eval_p.add_argument("--config", default=None, help="Engine config JSON file")

    agentic_p = sub.add_parser("agentic", help="Agentic evaluation with automatic metric selection")
    agentic_p.add_argument("--inputs", required=True, help="Path to the JSONL dataset")
    agentic_p.add_argument("--out-base", required=True, help="Output path base (extensions appended)")
    agentic_p.add_argument("--format", default="json", help="Comma-separated subset of json,md,csv")
    agentic_p.add_argument("--config", default=None, help="Engine config JSON file")

    mk = sub.add_parser("make-variants", help="Build the five-variant corpus from source records")
    mk.add_argument("--source", required=True, help="JSON array of source records")
    mk.add_argument("--out", required=True, help="Output JSONL path")
    mk.add_argument("--ragas", default=None, help="Also write a RAGAS-compatible JSON export here")

    serve_p = sub.add_parser("serve", help="Start the local HTTP API (and web UI when built)")
    serve_p.add_argument("--port", type=int, default=8400)
    serve_p.add_argument("--bind", default="127.0.0.1")
    serve_p.add_argument("--ui-dir", default=None, help="Directory of built web UI assets")

    return parser


def _parse_formats(raw: str) -> list[str]:
    formats = [f.strip() for f in raw.split(",") if f.strip()]
    for fmt in formats:
        if fmt not in FORMATS:
            raise ValueError(f"unknown format {fmt!r}; valid: {', '.join(FORMATS)}")
    if not formats:
        raise ValueError("at least one format is required")
    return formats


def _load_config(path: str | None) -> EngineConfig:
    if path is None:
        return EngineConfig()
    return EngineConfig.from_file(path)


def _load_items(path: str):
    loaded = load_jsonl(path)
    for issue in loaded.issues:
        print(f"warning: line {issue.line}: {issue.message}", file=sys.stderr)
    if loaded.empty_chunks_dropped:
        print(f"warning: dropped {loaded.empty_chunks_dropped} empty context chunk(s)", file=sys.stderr)
    return loaded.items


def cmd_list_metrics() -> int:
    for descriptor in load_metrics().values():
        print(
            f"{descriptor.name:22s} inputs={descriptor.required_letters():5s} "
            f"dimension={descriptor.dimension.value:20s} {descriptor.summary}"
        )
    return EXIT_OK


def _finish_run(report, out_base: str, formats: list[str]) -> int:
    paths = write_report(report, out_base, formats)
    for path in paths:
        print(f"wrote {path}")
    errors = report.case_error_count()
    print(str(report))
    if errors:
        print(f"completed with {errors} case-level error(s)")
        return EXIT_CASE_ERRORS
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    try:
        formats = _parse_formats(args.format)
        config = _load_config(args.config)
        metric_names = [m.strip() for m in args.metrics.split(",") if m.strip()]
        items = _load_items(args.inputs)
        report = evaluate(items, metric_names, config=config)
    except UnknownMetric as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("valid metrics: " + ", ".join(METRIC_NAMES), file=sys.stderr)
        return EXIT_FATAL
    except (OSError, ValueError, DatasetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL
    return _finish_run(report, args.out_base, formats)


def cmd_agentic(args: argparse.Namespace) -> int:
    try:
        formats = _parse_formats(args.format)
        config = _load_config(args.config)
        items = _load_items(args.inputs)
        report = run_agentic(items, config=config)
    except (OSError, ValueError, DatasetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL
    return _finish_run(report, args.out_base, formats)


def cmd_make_variants(args: argparse.Namespace) -> int:
    try:
        records = load_source_records(args.source)
        items = build_corpus(records)
        out = write_jsonl(items, args.out)
        print(f"wrote {len(items)} items from {len(records)} records to {out}")
        if args.ragas:
            ragas_path = export_ragas_json(items, args.ragas)
            print(f"wrote RAGAS-compatible export to {ragas_path}")
    except (OSError, ValueError, EmptyFacts) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from ragvue.service import create_app

    ui_dir = args.ui_dir
    if ui_dir is None:
        default_ui = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        ui_dir = str(default_ui) if default_ui.is_dir() else None
    app = create_app(ui_dir=ui_dir, port=args.port)
    print(f"serving on http://{args.bind}:{args.port}")
    uvicorn.run(app, host=args.bind, port=args.port, log_level="warning")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help and 2 for usage errors; keep that contract.
        return int(exc.code or 0)
    if args.command == "list-metrics":
        return cmd_list_metrics()
    if args.command == "eval":
        return cmd_eval(args)
    if args.command == "agentic":
        return cmd_agentic(args)
    if args.command == "make-variants":
        return cmd_make_variants(args)
    if args.command == "serve":
        return cmd_serve(args)
    parser.print_usage(sys.stderr)
    return EXIT_FATAL


def main_entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    main_entry()
