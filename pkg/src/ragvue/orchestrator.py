"""Agentic-mode building blocks: input-shape metric selection and composites."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping

from ragvue.model import (
    ANSWER_COMPOSITE_METRICS,
    PER_CASE_METRICS,
    RETRIEVAL_COVERAGE,
    RETRIEVAL_RELEVANCE,
    EvalItem,
    WeightsConfig,
    descriptor_for,
)


@dataclass(frozen=True)
class MetricSelection:
    """Which per-case metrics apply to an item, and why the rest were skipped."""

    item_id: str
    selected: tuple[str, ...]
    skipped: tuple[tuple[str, str], ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "item_id": self.item_id,
            "selected": list(self.selected),
            "skipped": [{"metric": m, "reason": r} for m, r in self.skipped],
        }


@dataclass(frozen=True)
class Composites:
    """Synthesized high-level scores for one case."""

    retrieval_overall: float | None
    answer_overall: float | None
    weights_used: dict[str, float]
    renormalized: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "retrieval_overall": self.retrieval_overall,
            "answer_overall": self.answer_overall,
            "weights_used": self.weights_used,
            "renormalized": self.renormalized,
        }

    @classmethod
    def from_dict(cls, raw: Mapping[str, Any]) -> "Composites":
        return cls(
            retrieval_overall=raw.get("retrieval_overall"),
            answer_overall=raw.get("answer_overall"),
            weights_used=dict(raw.get("weights_used") or {}),
            renormalized=bool(raw.get("renormalized", False)),
        )


_MISSING_REASONS = {"question": "no question", "answer": "no answer", "contexts": "no contexts"}


def select_for_shape(has_question: bool, has_answer: bool, has_contexts: bool) -> MetricSelection:
    """Pure selection over the six per-case metrics from input presence."""
    present = set()
    if has_question:
        present.add("question")
    if has_answer:
        present.add("answer")
    if has_contexts:
        present.add("contexts")
    selected: list[str] = []
    skipped: list[tuple[str, str]] = []
    for name in PER_CASE_METRICS:
        missing = descriptor_for(name).required - present
        if missing:
            order = ("question", "answer", "contexts")
            reason = "; ".join(_MISSING_REASONS[k] for k in order if k in missing)
            skipped.append((name, reason))
        else:
            selected.append(name)
    return MetricSelection(item_id="", selected=tuple(selected), skipped=tuple(skipped))


def select_metrics(item: EvalItem) -> MetricSelection:
    """Select applicable metrics for an item based on which inputs it provides."""
    shape = select_for_shape(bool(item.question.strip()), item.has_answer, item.has_contexts)
    return MetricSelection(item_id=item.id, selected=shape.selected, skipped=shape.skipped)


def harmonic_mean(a: float, b: float) -> float:
    """2ab/(a+b), defined as 0 when both inputs are 0."""
    if not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
        raise ValueError("harmonic mean inputs must lie in [0, 1]")
    if a + b == 0.0:
        return 0.0
    return 2.0 * a * b / (a + b)


def answer_composite(results: Mapping[str, float], weights: WeightsConfig) -> float | None:
    """Weighted blend of the answer-level scores present in ``results``.

    Weights are renormalized over the present subset; returns None when all
    four components are missing.
    """
    weight_map = weights.as_map()
    present = [(name, results[name]) for name in ANSWER_COMPOSITE_METRICS if name in results]
    if not present:
        return None
    total_weight = sum(weight_map[name] for name, _ in present)
    if total_weight == 0.0:
        # All present components carry zero weight; fall back to a plain mean.
        return sum(score for _, score in present) / len(present)
    return sum(weight_map[name] * score for name, score in present) / total_weight


def build_composites(scores: Mapping[str, float], weights: WeightsConfig) -> Composites:
    """Assemble both composites from the case's applicable metric scores."""
    retrieval_overall = None
    if RETRIEVAL_RELEVANCE in scores and RETRIEVAL_COVERAGE in scores:
        retrieval_overall = harmonic_mean(scores[RETRIEVAL_RELEVANCE], scores[RETRIEVAL_COVERAGE])
    present = [name for name in ANSWER_COMPOSITE_METRICS if name in scores]
    overall = answer_composite(scores, weights)
    renormalized = bool(present) and len(present) < len(ANSWER_COMPOSITE_METRICS)
    return Composites(
        retrieval_overall=retrieval_overall,
        answer_overall=overall,
        weights_used=weights.to_dict(),
        renormalized=renormalized,
    )
