"""Run machinery for manual and agentic evaluation."""

from __future__ import annotations

import json
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, Sequence

from ragvue.aspects import AspectCache
from ragvue.calibration import calibration_result, default_grid
from ragvue.judge import JudgeConfig, JudgeProvider, build_provider
from ragvue.metrics import run_metric
from ragvue.model import (
    CALIBRATION,
    STRICT_FAITHFULNESS,
    EvalItem,
    ResultStatus,
    WeightsConfig,
    normalize_items,
    validate_metric_names,
)
from ragvue.orchestrator import build_composites, select_metrics
from ragvue.reports import AggregateStats, CaseReport, RunReport, aggregate_scores

ProgressHook = Callable[[int, int, CaseReport], None]


@dataclass(frozen=True)
class EngineConfig:
    """Engine-level settings shared by the facade, CLI, and service."""

    judge: JudgeConfig = field(default_factory=JudgeConfig)
    weights: WeightsConfig = field(default_factory=WeightsConfig)
    calibration_grid: tuple[JudgeConfig, ...] | None = None
    calibration_target: str = STRICT_FAITHFULNESS
    calibration_in_agentic: bool = False
    workers: int = 4
    echo_chars: int | None = None
    judge_fixture: str | None = None

    @classmethod
    def from_dict(cls, raw: Mapping[str, Any]) -> "EngineConfig":
        grid = raw.get("calibration_grid")
        return cls(
            judge=JudgeConfig.from_dict(raw.get("judge", {})),
            weights=WeightsConfig.from_dict(raw.get("weights", {})),
            calibration_grid=None if grid is None else tuple(JudgeConfig.from_dict(g) for g in grid),
            calibration_target=raw.get("calibration_target", STRICT_FAITHFULNESS),
            calibration_in_agentic=bool(raw.get("calibration_in_agentic", False)),
            workers=int(raw.get("workers", 4)),
            echo_chars=raw.get("echo_chars"),
            judge_fixture=raw.get("judge_fixture"),
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "EngineConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def snapshot(self) -> dict[str, Any]:
        return {
            "judge": self.judge.snapshot(),
            "weights": self.weights.to_dict(),
            "tau": self.weights.tau,
            "calibration": {
                "grid": [g.snapshot() for g in (self.calibration_grid or default_grid(self.judge))],
                "target": self.calibration_target,
                "in_agentic": self.calibration_in_agentic,
            },
            "judge_fixture": self.judge_fixture,
        }


def _echo(text: str | None, limit: int | None) -> str | None:
    if text is None or limit is None or len(text) <= limit:
        return text
    return text[: max(0, limit - 3)] + "..."


class _RunContext:
    """Resolved providers and shared per-run state."""

    def __init__(
        self,
        config: EngineConfig,
        judge: JudgeConfig | JudgeProvider | None,
        weights: WeightsConfig | None,
        api_key: str | None = None,
    ):
        self.config = config
        self.weights = weights or config.weights
        judge = judge if judge is not None else config.judge
        if isinstance(judge, JudgeConfig):
            self.provider = build_provider(judge, api_key=api_key, fixture=config.judge_fixture)
        else:
            self.provider = judge
        self.aspect_cache = AspectCache()
        self.grid = self._build_grid(api_key)

    def _build_grid(self, api_key: str | None) -> list[JudgeProvider]:
        if self.config.calibration_grid is not None:
            return [
                build_provider(cfg, api_key=api_key, fixture=self.config.judge_fixture)
                for cfg in self.config.calibration_grid
            ]
        if hasattr(self.provider, "with_temperature"):
            return [self.provider.with_temperature(0.0), self.provider.with_temperature(0.7)]
        return [self.provider]

    def run_one(self, name: str, item: EvalItem):
        if name == CALIBRATION:
            return calibration_result(
                item,
                self.config.calibration_target,
                self.grid,
                tau=self.weights.tau,
                aspect_cache=self.aspect_cache,
                judge_snapshot=self.provider.config.snapshot(),
            )
        return run_metric(
            name, item, self.provider, tau=self.weights.tau, aspect_cache=self.aspect_cache
        )


def _manual_case(ctx: _RunContext, item: EvalItem, names: Sequence[str]) -> CaseReport:
    results = tuple(ctx.run_one(name, item) for name in names)
    limit = ctx.config.echo_chars
    return CaseReport(
        item_id=item.id,
        question=_echo(item.question, limit),
        answer=_echo(item.answer, limit),
        contexts=tuple(_echo(c, limit) for c in item.contexts),
        results=results,
        metadata=dict(item.metadata),
    )


def _agentic_case(ctx: _RunContext, item: EvalItem) -> CaseReport:
    selection = select_metrics(item)
    names = list(selection.selected)
    if ctx.config.calibration_in_agentic and item.has_answer and item.has_contexts:
        names.append(CALIBRATION)
    results = tuple(ctx.run_one(name, item) for name in names)
    scores = {r.metric: r.score for r in results if r.status is ResultStatus.OK and r.metric != CALIBRATION}
    composites = build_composites(scores, ctx.weights)
    limit = ctx.config.echo_chars
    return CaseReport(
        item_id=item.id,
        question=_echo(item.question, limit),
        answer=_echo(item.answer, limit),
        contexts=tuple(_echo(c, limit) for c in item.contexts),
        results=results,
        selection=selection,
        composites=composites,
        metadata=dict(item.metadata),
    )


def _aggregate_cases(cases: Sequence[CaseReport]) -> dict[str, AggregateStats]:
    by_metric: dict[str, list[float]] = {}
    for case in cases:
        for result in case.results:
            if result.status is ResultStatus.OK:
                by_metric.setdefault(result.metric, []).append(result.score)
    return {name: aggregate_scores(scores) for name, scores in sorted(by_metric.items())}


def _aggregate_composites(cases: Sequence[CaseReport]) -> dict[str, AggregateStats]:
    retrieval = [c.composites.retrieval_overall for c in cases
                 if c.composites and c.composites.retrieval_overall is not None]
    answer = [c.composites.answer_overall for c in cases
              if c.composites and c.composites.answer_overall is not None]
    out: dict[str, AggregateStats] = {}
    if retrieval:
        out["retrieval_overall"] = aggregate_scores(retrieval)
    if answer:
        out["answer_overall"] = aggregate_scores(answer)
    return out


def _execute(
    items: Sequence[EvalItem],
    worker: Callable[[EvalItem], CaseReport],
    workers: int,
    on_case: ProgressHook | None,
) -> list[CaseReport]:
    total = len(items)
    cases: list[CaseReport | None] = [None] * total
    completed = 0

    def note(index: int, case: CaseReport) -> None:
        nonlocal completed
        cases[index] = case
        completed += 1
        if on_case is not None:
            on_case(completed, total, case)

    if workers <= 1 or total == 1:
        for i, item in enumerate(items):
            note(i, worker(item))
    else:
        with ThreadPoolExecutor(max_workers=min(workers, total)) as pool:
            futures = {pool.submit(worker, item): i for i, item in enumerate(items)}
            # Collect in submission order; note() stays single-threaded here.
            for future, i in futures.items():
                note(i, future.result())
    return [c for c in cases if c is not None]


def _make_report(
    mode: str,
    cases: list[CaseReport],
    ctx: _RunContext,
    metric_names: Sequence[str] | None,
) -> RunReport:
    snapshot = ctx.config.snapshot()
    snapshot["judge"] = ctx.provider.config.snapshot()
    snapshot["weights"] = ctx.weights.to_dict()
    snapshot["tau"] = ctx.weights.tau
    snapshot["mode"] = mode
    snapshot["metrics"] = list(metric_names) if metric_names is not None else "auto"
    return RunReport(
        run_id=uuid.uuid4().hex,
        created_at=datetime.now(timezone.utc).isoformat(),
        mode=mode,
        config_snapshot=snapshot,
        cases=tuple(cases),
        aggregates=_aggregate_cases(cases),
        composite_aggregates=_aggregate_composites(cases) if mode == "agentic" else None,
    )


def evaluate(
    items: Iterable[EvalItem | Mapping[str, Any]],
    metrics: Sequence[str],
    judge: JudgeConfig | JudgeProvider | None = None,
    weights: WeightsConfig | None = None,
    *,
    config: EngineConfig | None = None,
    api_key: str | None = None,
    on_case: ProgressHook | None = None,
) -> RunReport:
    """Manual-mode evaluation: run the requested metrics over every item.

    Metrics whose required inputs are missing yield NOT_APPLICABLE results;
    judge failures surface as per-case error results and never abort the run.
    """
    names = validate_metric_names(metrics)
    normalized = normalize_items(items)
    ctx = _RunContext(config or EngineConfig(), judge, weights, api_key)
    cases = _execute(normalized, lambda item: _manual_case(ctx, item, names), ctx.config.workers, on_case)
    return _make_report("manual", cases, ctx, names)


def run_agentic(
    items: Iterable[EvalItem | Mapping[str, Any]],
    judge: JudgeConfig | JudgeProvider | None = None,
    weights: WeightsConfig | None = None,
    *,
    config: EngineConfig | None = None,
    api_key: str | None = None,
    on_case: ProgressHook | None = None,
) -> RunReport:
    """Agentic-mode evaluation: select metrics per item, execute, synthesize composites."""
    normalized = normalize_items(items)
    ctx = _RunContext(config or EngineConfig(), judge, weights, api_key)
    cases = _execute(normalized, lambda item: _agentic_case(ctx, item), ctx.config.workers, on_case)
    return _make_report("agentic", cases, ctx, None)
