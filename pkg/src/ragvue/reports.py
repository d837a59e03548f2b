"""Dataset ingestion (JSONL), report assembly, and json/md/csv emission."""

from __future__ import annotations

import copy
import csv
import io
import json
import statistics
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping

from ragvue.model import EvalItem, MetricResult, ResultStatus, load_metrics
from ragvue.orchestrator import Composites, MetricSelection

REPORT_SCHEMA_VERSION = 1
CSV_EXPLANATION_LIMIT = 200
FORMATS = ("json", "md", "csv")

#: Report fields that legitimately differ between otherwise identical runs.
VOLATILE_FIELDS = ("run_id", "created_at", "elapsed")


class DatasetError(ValueError):
    """A dataset could not be loaded."""


class AllLinesInvalid(DatasetError):
    def __init__(self, issues: list["LineIssue"]):
        self.issues = issues
        detail = "; ".join(f"line {i.line}: {i.message}" for i in issues[:5]) or "no data lines"
        super().__init__(f"no valid items in dataset ({detail})")


class MissingAnswer(ValueError):
    def __init__(self, item_id: str):
        self.item_id = item_id
        super().__init__(f"item {item_id!r} has no answer; export requires answers")


@dataclass(frozen=True)
class LineIssue:
    line: int
    message: str

    def to_dict(self) -> dict[str, Any]:
        return {"line": self.line, "message": self.message}


@dataclass
class LoadResult:
    items: list[EvalItem]
    issues: list[LineIssue] = field(default_factory=list)
    empty_chunks_dropped: int = 0

    def summary(self) -> dict[str, Any]:
        return {
            "items": len(self.items),
            "errors": [i.to_dict() for i in self.issues],
            "empty_chunks_dropped": self.empty_chunks_dropped,
        }


def parse_jsonl(lines: Iterable[str], strict: bool = False) -> LoadResult:
    """Parse JSONL records into items; lenient by default, collecting line issues."""
    items: list[EvalItem] = []
    issues: list[LineIssue] = []
    seen_ids: set[str] = set()
    dropped = 0
    for lineno, raw_line in enumerate(lines, start=1):
        text = raw_line.strip()
        if not text:
            continue
        try:
            raw = json.loads(text)
            if not isinstance(raw, dict):
                raise ValueError("line is not a JSON object")
            item = EvalItem.from_dict(raw, index=len(items))
            if item.id in seen_ids:
                raise ValueError(f"duplicate item id {item.id!r}")
        except ValueError as exc:
            if strict:
                raise DatasetError(f"line {lineno}: {exc}") from exc
            issues.append(LineIssue(lineno, str(exc)))
            continue
        ctx = raw.get("context", raw.get("contexts", []))
        if isinstance(ctx, list):
            dropped += sum(1 for c in ctx if isinstance(c, str) and not c.strip())
        seen_ids.add(item.id)
        items.append(item)
    if not items:
        raise AllLinesInvalid(issues)
    return LoadResult(items=items, issues=issues, empty_chunks_dropped=dropped)


def load_jsonl(path: str | Path, strict: bool = False) -> LoadResult:
    """Load a JSONL dataset file; raises FileNotFoundError / AllLinesInvalid."""
    with open(path, encoding="utf-8") as fh:
        return parse_jsonl(fh, strict=strict)


@dataclass(frozen=True)
class AggregateStats:
    mean: float
    std: float
    applicable_count: int

    def to_dict(self) -> dict[str, Any]:
        return {"mean": self.mean, "std": self.std, "applicable_count": self.applicable_count}


def aggregate_scores(scores: list[float]) -> AggregateStats:
    """Population-convention mean/std over applicable scores."""
    if not scores:
        return AggregateStats(mean=0.0, std=0.0, applicable_count=0)
    return AggregateStats(
        mean=statistics.fmean(scores),
        std=statistics.pstdev(scores),
        applicable_count=len(scores),
    )


@dataclass(frozen=True)
class CaseReport:
    """One item's results, plus selection and composites in agentic mode."""

    item_id: str
    question: str
    answer: str | None
    contexts: tuple[str, ...]
    results: tuple[MetricResult, ...]
    selection: MetricSelection | None = None
    composites: Composites | None = None
    metadata: dict[str, str] = field(default_factory=dict)

    def scores(self) -> dict[str, float]:
        return {r.metric: r.score for r in self.results if r.status is ResultStatus.OK}

    def result_for(self, metric: str) -> MetricResult | None:
        for r in self.results:
            if r.metric == metric:
                return r
        return None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "item_id": self.item_id,
            "question": self.question,
            "answer": self.answer,
            "contexts": list(self.contexts),
            "metadata": dict(self.metadata),
            "results": [r.to_dict() for r in self.results],
        }
        if self.selection is not None:
            sel = self.selection.to_dict()
            del sel["item_id"]
            out["selection"] = sel
        if self.composites is not None:
            out["composites"] = self.composites.to_dict()
        return out

    @classmethod
    def from_dict(cls, raw: Mapping[str, Any]) -> "CaseReport":
        selection = None
        if "selection" in raw:
            sel = raw["selection"]
            selection = MetricSelection(
                item_id=raw["item_id"],
                selected=tuple(sel.get("selected", ())),
                skipped=tuple((e["metric"], e["reason"]) for e in sel.get("skipped", ())),
            )
        composites = Composites.from_dict(raw["composites"]) if "composites" in raw else None
        return cls(
            item_id=raw["item_id"],
            question=raw.get("question", ""),
            answer=raw.get("answer"),
            contexts=tuple(raw.get("contexts", ())),
            results=tuple(MetricResult.from_dict(r) for r in raw.get("results", ())),
            selection=selection,
            composites=composites,
            metadata=dict(raw.get("metadata") or {}),
        )


@dataclass(frozen=True)
class RunReport:
    """Per-case results, aggregates, and the config snapshot for reproducibility."""

    run_id: str
    created_at: str
    mode: str
    config_snapshot: dict[str, Any]
    cases: tuple[CaseReport, ...]
    aggregates: dict[str, AggregateStats]
    composite_aggregates: dict[str, AggregateStats] | None = None
    report_schema_version: int = REPORT_SCHEMA_VERSION

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "report_schema_version": self.report_schema_version,
            "run_id": self.run_id,
            "created_at": self.created_at,
            "mode": self.mode,
            "config_snapshot": self.config_snapshot,
            "aggregates": {k: v.to_dict() for k, v in self.aggregates.items()},
        }
        if self.composite_aggregates is not None:
            out["composite_aggregates"] = {k: v.to_dict() for k, v in self.composite_aggregates.items()}
        out["cases"] = [c.to_dict() for c in self.cases]
        return out

    @classmethod
    def from_dict(cls, raw: Mapping[str, Any]) -> "RunReport":
        composite = raw.get("composite_aggregates")
        return cls(
            run_id=raw.get("run_id", ""),
            created_at=raw.get("created_at", ""),
            mode=raw["mode"],
            config_snapshot=dict(raw.get("config_snapshot") or {}),
            cases=tuple(CaseReport.from_dict(c) for c in raw.get("cases", ())),
            aggregates={
                k: AggregateStats(v["mean"], v["std"], v["applicable_count"])
                for k, v in raw.get("aggregates", {}).items()
            },
            composite_aggregates=None if composite is None else {
                k: AggregateStats(v["mean"], v["std"], v["applicable_count"])
                for k, v in composite.items()
            },
            report_schema_version=int(raw.get("report_schema_version", REPORT_SCHEMA_VERSION)),
        )

    def case_error_count(self) -> int:
        return sum(
            1 for case in self.cases for r in case.results if r.status is ResultStatus.ERROR
        )

    def __str__(self) -> str:
        lines = [f"run {self.run_id} ({self.mode}): {len(self.cases)} cases"]
        for name, stats in self.aggregates.items():
            lines.append(
                f"  {name}: mean={stats.mean:.3f} std={stats.std:.3f} n={stats.applicable_count}"
            )
        return "\n".join(lines)


def strip_volatile(report_dict: Mapping[str, Any]) -> dict[str, Any]:
    """Deep-copy a report dict without run_id, created_at, and elapsed fields."""
    out = copy.deepcopy(dict(report_dict))
    out.pop("run_id", None)
    out.pop("created_at", None)
    for case in out.get("cases", ()):
        for result in case.get("results", ()):
            result.pop("elapsed", None)
    return out


def canonical_json(report: RunReport | Mapping[str, Any], *, volatile: bool = True) -> str:
    """The one JSON serialization used by every surface (files, API)."""
    data = report.to_dict() if isinstance(report, RunReport) else dict(report)
    if not volatile:
        data = strip_volatile(data)
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def _truncate(text: str, limit: int) -> str:
    text = " ".join(text.split())
    if len(text) <= limit:
        return text
    return text[: limit - 3] + "..."


def render_csv(report: RunReport) -> str:
    """One row per (case, metric result): item_id, metric, score, applicable, explanation."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["item_id", "metric", "score", "applicable", "explanation"])
    for case in report.cases:
        for result in case.results:
            writer.writerow([
                case.item_id,
                result.metric,
                "" if result.score is None else repr(result.score),
                "true" if result.applicable else "false",
                _truncate(result.explanation, CSV_EXPLANATION_LIMIT),
            ])
    return buf.getvalue()


def _md_escape(text: str) -> str:
    return " ".join(text.split())


def render_markdown(report: RunReport) -> str:
    """Human summary: aggregate table plus one section per case."""
    registry_order = list(load_metrics())
    lines = [
        "# Evaluation report",
        "",
        f"- run: {report.run_id}",
        f"- created: {report.created_at}",
        f"- mode: {report.mode}",
        f"- cases: {len(report.cases)}",
        "",
        "## Aggregates",
        "",
        "| metric | mean | std | applicable |",
        "| --- | --- | --- | --- |",
    ]
    ordered = sorted(
        report.aggregates.items(),
        key=lambda kv: registry_order.index(kv[0]) if kv[0] in registry_order else len(registry_order),
    )
    for name, stats in ordered:
        lines.append(f"| {name} | {stats.mean:.4f} | {stats.std:.4f} | {stats.applicable_count} |")
    if report.composite_aggregates:
        lines += ["", "## Composite aggregates", "", "| composite | mean | std | applicable |", "| --- | --- | --- | --- |"]
        for name, stats in report.composite_aggregates.items():
            lines.append(f"| {name} | {stats.mean:.4f} | {stats.std:.4f} | {stats.applicable_count} |")
    for case in report.cases:
        lines += ["", f"## {case.item_id}", "", f"**Question:** {_md_escape(case.question)}"]
        if case.answer is not None:
            lines.append(f"**Answer:** {_md_escape(case.answer)}")
        if case.contexts:
            lines.append(f"**Contexts:** {len(case.contexts)} chunk(s)")
        if case.selection is not None:
            lines.append("**Selected:** " + (", ".join(case.selection.selected) or "none"))
            for metric, reason in case.selection.skipped:
                lines.append(f"**Skipped:** {metric} ({reason})")
        lines.append("")
        for result in case.results:
            shown = "n/a" if result.score is None else f"{result.score:.4f}"
            lines.append(f"- **{result.metric}**: {shown} [{result.status.value}] {_md_escape(result.explanation)}")
        if case.composites is not None:
            comp = case.composites
            ret = "n/a" if comp.retrieval_overall is None else f"{comp.retrieval_overall:.4f}"
            ans = "n/a" if comp.answer_overall is None else f"{comp.answer_overall:.4f}"
            flag = " (weights renormalized)" if comp.renormalized else ""
            lines.append(f"- **retrieval_overall**: {ret}")
            lines.append(f"- **answer_overall**: {ans}{flag}")
    return "\n".join(lines) + "\n"


def write_report(
    report: RunReport,
    out_base: str | Path,
    formats: Iterable[str] = ("json",),
) -> list[Path]:
    """Write the report next to ``out_base`` in each format; clean up on failure."""
    wanted = list(dict.fromkeys(formats))
    if not wanted:
        raise ValueError("formats must be non-empty")
    for fmt in wanted:
        if fmt not in FORMATS:
            raise ValueError(f"unknown report format {fmt!r}; valid: {', '.join(FORMATS)}")
    renderers = {
        "json": lambda: canonical_json(report),
        "md": lambda: render_markdown(report),
        "csv": lambda: render_csv(report),
    }
    written: list[Path] = []
    try:
        for fmt in wanted:
            path = Path(f"{out_base}.{fmt}")
            path.write_text(renderers[fmt](), encoding="utf-8", newline="\n")
            written.append(path)
    except OSError:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    return written


def export_ragas_json(items: Iterable[EvalItem], path: str | Path) -> Path:
    """Emit parallel question/answer/contexts arrays for external metric tooling."""
    items = list(items)
    for item in items:
        if not item.has_answer:
            raise MissingAnswer(item.id)
    doc = {
        "question": [item.question for item in items],
        "answer": [item.answer for item in items],
        "contexts": [list(item.contexts) for item in items],
    }
    out = Path(path)
    out.write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8", newline="\n")
    return out
