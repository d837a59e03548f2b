"""Cross-configuration agreement: run a metric under several judges, score 1 - range."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from ragvue.aspects import AspectCache
from ragvue.judge import JudgeConfig, JudgeProvider, resolve_provider
from ragvue.metrics import run_metric
from ragvue.model import (
    CALIBRATION,
    DEFAULT_TAU,
    PER_CASE_METRICS,
    EvalItem,
    MetricResult,
    ResultStatus,
    UnknownMetric,
    descriptor_for,
)


class AllRunsExcluded(ValueError):
    """Every configured run was inapplicable or errored; no agreement to compute."""

    def __init__(self, excluded: list[dict[str, Any]]):
        self.excluded = excluded
        super().__init__("all calibration runs were excluded")


@dataclass(frozen=True)
class CalibrationRun:
    judge: dict[str, Any]
    score: float
    explanation: str

    def to_dict(self) -> dict[str, Any]:
        return {"judge": self.judge, "score": self.score, "explanation": self.explanation}


@dataclass(frozen=True)
class CalibrationResult:
    """Per-judge scores for one target metric plus their agreement (1 - spread)."""

    target_metric: str
    runs: tuple[CalibrationRun, ...]
    agreement: float
    spread: float
    excluded: tuple[dict[str, Any], ...] = ()

    def __post_init__(self):
        if not self.runs:
            raise ValueError("calibration needs at least one retained run")
        if not (0.0 <= self.spread <= 1.0):
            raise ValueError("spread must lie in [0, 1]")
        if abs(self.agreement - (1.0 - self.spread)) > 1e-12:
            raise ValueError("agreement must equal 1 - spread")

    def to_dict(self) -> dict[str, Any]:
        return {
            "target_metric": self.target_metric,
            "runs": [r.to_dict() for r in self.runs],
            "agreement": self.agreement,
            "spread": self.spread,
            "excluded": list(self.excluded),
        }


def agreement_from_scores(scores: Sequence[float]) -> float:
    """1 minus the score range; 1.0 when a single score is present."""
    if not scores:
        raise ValueError("need at least one score")
    return 1.0 - (max(scores) - min(scores))


def calibrate(
    item: EvalItem,
    target: str,
    configs: Sequence[JudgeConfig | JudgeProvider],
    *,
    tau: float = DEFAULT_TAU,
    aspect_cache: AspectCache | None = None,
) -> CalibrationResult:
    """Run ``target`` once per config and report cross-judge agreement.

    Inapplicable or errored runs are excluded from the agreement and
    recorded; AllRunsExcluded is raised when nothing remains.
    """
    if target not in PER_CASE_METRICS:
        raise UnknownMetric(target)
    if not configs:
        raise ValueError("configs must be non-empty")
    runs: list[CalibrationRun] = []
    excluded: list[dict[str, Any]] = []
    for config in configs:
        provider = resolve_provider(config)
        result = run_metric(target, item, provider, tau=tau, aspect_cache=aspect_cache)
        if result.status is ResultStatus.OK:
            runs.append(CalibrationRun(provider.config.snapshot(), result.score, result.explanation))
        else:
            excluded.append({
                "judge": provider.config.snapshot(),
                "status": result.status.value,
                "explanation": result.explanation,
            })
    if not runs:
        raise AllRunsExcluded(excluded)
    scores = [r.score for r in runs]
    spread = max(scores) - min(scores)
    return CalibrationResult(
        target_metric=target,
        runs=tuple(runs),
        agreement=1.0 - spread,
        spread=spread,
        excluded=tuple(excluded),
    )


def default_grid(primary: JudgeConfig) -> list[JudgeConfig]:
    """Default calibration grid: the primary judge model at temperatures 0.0 and 0.7."""
    return [
        JudgeConfig(**{**primary.snapshot(), "temperature": 0.0}),
        JudgeConfig(**{**primary.snapshot(), "temperature": 0.7}),
    ]


def calibration_result(
    item: EvalItem,
    target: str,
    configs: Sequence[JudgeConfig | JudgeProvider],
    *,
    tau: float = DEFAULT_TAU,
    aspect_cache: AspectCache | None = None,
    judge_snapshot: dict[str, Any] | None = None,
) -> MetricResult:
    """The calibration metric as a MetricResult (score = agreement)."""
    import time

    started = time.perf_counter()
    snapshot = judge_snapshot or {}
    required = descriptor_for(CALIBRATION).required
    if "answer" in required and not item.has_answer:
        return MetricResult.not_applicable(CALIBRATION, "answer missing: calibration needs a full (Q, A, C) item", judge=snapshot)
    if "contexts" in required and not item.has_contexts:
        return MetricResult.not_applicable(CALIBRATION, "no contexts: calibration needs a full (Q, A, C) item", judge=snapshot)
    try:
        outcome = calibrate(item, target, configs, tau=tau, aspect_cache=aspect_cache)
    except AllRunsExcluded as exc:
        return MetricResult.not_applicable(
            CALIBRATION,
            f"all {len(exc.excluded)} calibration runs for {target} were excluded",
            judge=snapshot,
            elapsed=time.perf_counter() - started,
        )
    return MetricResult.ok(
        CALIBRATION,
        outcome.agreement,
        f"{len(outcome.runs)} judge configurations scored {target} with spread {outcome.spread:.4f}",
        details=outcome.to_dict(),
        judge=snapshot,
        elapsed=time.perf_counter() - started,
    )
