"""Shared data model: evaluation items, metric results, registry, weights."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Iterable, Mapping

RETRIEVAL_RELEVANCE = "retrieval_relevance"
RETRIEVAL_COVERAGE = "retrieval_coverage"
ANSWER_RELEVANCE = "answer_relevance"
ANSWER_COMPLETENESS = "answer_completeness"
CLARITY = "clarity"
STRICT_FAITHFULNESS = "strict_faithfulness"
CALIBRATION = "calibration"

#: The six metrics computed per case; calibration wraps them.
PER_CASE_METRICS = (
    RETRIEVAL_RELEVANCE,
    RETRIEVAL_COVERAGE,
    ANSWER_RELEVANCE,
    ANSWER_COMPLETENESS,
    CLARITY,
    STRICT_FAITHFULNESS,
)

METRIC_NAMES = PER_CASE_METRICS + (CALIBRATION,)

#: Components of the answer-level composite, in weight order.
ANSWER_COMPOSITE_METRICS = (
    STRICT_FAITHFULNESS,
    ANSWER_RELEVANCE,
    ANSWER_COMPLETENESS,
    CLARITY,
)

DEFAULT_TAU = 0.7


class Dimension(str, Enum):
    RETRIEVAL = "retrieval"
    ANSWER = "answer"
    GROUNDING_STABILITY = "grounding_stability"


class ResultStatus(str, Enum):
    OK = "ok"
    NOT_APPLICABLE = "not_applicable"
    ERROR = "error"


class UnknownMetric(ValueError):
    """Raised when a metric name is not in the registry."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(
            f"unknown metric {name!r}; valid names: {', '.join(METRIC_NAMES)}"
        )


class EmptyDataset(ValueError):
    """Raised when an evaluation is started with no items."""


_INPUT_LETTERS = {"question": "Q", "answer": "A", "contexts": "C"}


@dataclass(frozen=True)
class MetricDescriptor:
    """One registered metric: its name, required inputs, and dimension."""

    name: str
    required: frozenset[str]
    dimension: Dimension
    summary: str

    def required_letters(self) -> str:
        order = ("question", "answer", "contexts")
        return ",".join(_INPUT_LETTERS[k] for k in order if k in self.required)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "required": sorted(self.required),
            "dimension": self.dimension.value,
            "summary": self.summary,
        }


def _descriptor(name: str, required: Iterable[str], dim: Dimension, summary: str) -> MetricDescriptor:
    return MetricDescriptor(name, frozenset(required), dim, summary)


_REGISTRY: dict[str, MetricDescriptor] = {
    d.name: d
    for d in (
        _descriptor(
            RETRIEVAL_RELEVANCE,
            ("question", "contexts"),
            Dimension.RETRIEVAL,
            "Fraction of retrieved chunks whose per-chunk usefulness score reaches the threshold.",
        ),
        _descriptor(
            RETRIEVAL_COVERAGE,
            ("question", "contexts"),
            Dimension.RETRIEVAL,
            "Fraction of the question's atomic aspects supported by at least one retrieved chunk.",
        ),
        _descriptor(
            ANSWER_RELEVANCE,
            ("question", "answer"),
            Dimension.ANSWER,
            "How well the answer addresses the question's intent, with missing/off-topic diagnostics.",
        ),
        _descriptor(
            ANSWER_COMPLETENESS,
            ("question", "answer"),
            Dimension.ANSWER,
            "Fraction of the question's atomic aspects the answer explicitly addresses.",
        ),
        _descriptor(
            CLARITY,
            ("answer",),
            Dimension.ANSWER,
            "Linguistic quality of the answer: grammar, fluency, flow, conciseness, readability.",
        ),
        _descriptor(
            STRICT_FAITHFULNESS,
            ("answer", "contexts"),
            Dimension.GROUNDING_STABILITY,
            "Fraction of the answer's factual claims exactly grounded in the retrieved context.",
        ),
        _descriptor(
            CALIBRATION,
            ("question", "answer", "contexts"),
            Dimension.GROUNDING_STABILITY,
            "Agreement of a target metric across judge configurations: 1 minus the score range.",
        ),
    )
}


def load_metrics() -> dict[str, MetricDescriptor]:
    """Return all registered metric descriptors, keyed by name, in declaration order."""
    return dict(_REGISTRY)


def descriptor_for(name: str) -> MetricDescriptor:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise UnknownMetric(name) from None


def validate_metric_names(names: Iterable[str]) -> list[str]:
    """Check every name is registered; dedupe preserving first occurrence."""
    seen: list[str] = []
    for name in names:
        if name not in _REGISTRY:
            raise UnknownMetric(name)
        if name not in seen:
            seen.append(name)
    if not seen:
        raise ValueError("metrics list must be non-empty")
    return seen


_ITEM_KEYS = {"id", "question", "answer", "context", "contexts", "metadata"}


@dataclass(frozen=True)
class EvalItem:
    """One (question, answer?, contexts) record; the unit of evaluation."""

    id: str
    question: str
    answer: str | None = None
    contexts: tuple[str, ...] = ()
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.question.strip():
            raise ValueError("question must be non-empty")

    @property
    def has_answer(self) -> bool:
        return self.answer is not None and bool(self.answer.strip())

    @property
    def has_contexts(self) -> bool:
        return len(self.contexts) > 0

    @classmethod
    def create(
        cls,
        question: str,
        answer: str | None = None,
        contexts: Iterable[str] = (),
        id: str = "",
        metadata: Mapping[str, str] | None = None,
    ) -> "EvalItem":
        """Build a normalized item: trimmed question, empty context chunks dropped."""
        question = (question or "").strip()
        chunks = tuple(c.strip() for c in contexts if c is not None and c.strip())
        return cls(
            id=id,
            question=question,
            answer=answer,
            contexts=chunks,
            metadata=dict(metadata or {}),
        )

    @classmethod
    def from_dict(cls, raw: Mapping[str, Any], index: int = 0) -> "EvalItem":
        """Build an item from a parsed JSON record (the JSONL line shape)."""
        if not isinstance(raw, Mapping):
            raise ValueError("record must be a JSON object")
        question = raw.get("question")
        if not isinstance(question, str) or not question.strip():
            raise ValueError("missing or empty 'question'")
        answer = raw.get("answer")
        if answer is not None and not isinstance(answer, str):
            raise ValueError("'answer' must be a string when present")
        ctx = raw.get("context", raw.get("contexts", []))
        if isinstance(ctx, str):
            ctx = [ctx]
        if not isinstance(ctx, list) or any(not isinstance(c, str) for c in ctx):
            raise ValueError("'context' must be a string or a list of strings")
        item_id = raw.get("id")
        if item_id is not None and not isinstance(item_id, str):
            raise ValueError("'id' must be a string when present")
        metadata: dict[str, str] = {}
        declared = raw.get("metadata")
        if declared is not None:
            if not isinstance(declared, Mapping):
                raise ValueError("'metadata' must be an object")
            for k, v in declared.items():
                metadata[str(k)] = v if isinstance(v, str) else json.dumps(v, ensure_ascii=False)
        for k, v in raw.items():
            if k in _ITEM_KEYS:
                continue
            metadata[str(k)] = v if isinstance(v, str) else json.dumps(v, ensure_ascii=False)
        return cls.create(
            question=question,
            answer=answer,
            contexts=ctx,
            id=item_id or f"item-{index}",
            metadata=metadata,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "question": self.question,
            "answer": self.answer,
            "context": list(self.contexts),
            "metadata": dict(self.metadata),
        }


def normalize_items(items: Iterable[EvalItem | Mapping[str, Any]]) -> list[EvalItem]:
    """Coerce dict records to items, assign missing ids, enforce id uniqueness."""
    out: list[EvalItem] = []
    for i, entry in enumerate(items):
        if isinstance(entry, EvalItem):
            item = entry if entry.id else replace(entry, id=f"item-{i}")
        else:
            item = EvalItem.from_dict(entry, index=i)
        out.append(item)
    if not out:
        raise EmptyDataset("no items to evaluate")
    seen: set[str] = set()
    for item in out:
        if item.id in seen:
            raise ValueError(f"duplicate item id {item.id!r}")
        seen.add(item.id)
    return out


@dataclass(frozen=True)
class MetricResult:
    """A named score in [0,1] (or not applicable / errored) plus its explanation payload."""

    metric: str
    status: ResultStatus
    score: float | None
    explanation: str
    details: dict[str, Any] = field(default_factory=dict)
    judge: dict[str, Any] = field(default_factory=dict)
    elapsed: float = 0.0

    def __post_init__(self):
        if self.metric not in _REGISTRY:
            raise UnknownMetric(self.metric)
        if self.status is ResultStatus.OK:
            if self.score is None or not (0.0 <= self.score <= 1.0):
                raise ValueError(f"{self.metric}: score {self.score!r} outside [0, 1]")
        else:
            if self.score is not None:
                raise ValueError(f"{self.metric}: {self.status.value} result must carry no score")
            if not self.explanation.strip():
                raise ValueError(f"{self.metric}: {self.status.value} result needs an explanation")
        if self.elapsed < 0:
            raise ValueError("elapsed must be >= 0")

    @classmethod
    def ok(cls, metric: str, score: float, explanation: str, *, details=None, judge=None, elapsed=0.0) -> "MetricResult":
        return cls(metric, ResultStatus.OK, float(score), explanation,
                   details=details or {}, judge=judge or {}, elapsed=elapsed)

    @classmethod
    def not_applicable(cls, metric: str, explanation: str, *, judge=None, elapsed=0.0) -> "MetricResult":
        return cls(metric, ResultStatus.NOT_APPLICABLE, None, explanation,
                   judge=judge or {}, elapsed=elapsed)

    @classmethod
    def error(cls, metric: str, explanation: str, *, judge=None, elapsed=0.0) -> "MetricResult":
        return cls(metric, ResultStatus.ERROR, None, explanation,
                   judge=judge or {}, elapsed=elapsed)

    @property
    def applicable(self) -> bool:
        return self.status is ResultStatus.OK

    def to_dict(self) -> dict[str, Any]:
        return {
            "metric": self.metric,
            "status": self.status.value,
            "score": self.score,
            "explanation": self.explanation,
            "details": self.details,
            "judge": self.judge,
            "elapsed": self.elapsed,
        }

    @classmethod
    def from_dict(cls, raw: Mapping[str, Any]) -> "MetricResult":
        return cls(
            metric=raw["metric"],
            status=ResultStatus(raw["status"]),
            score=raw.get("score"),
            explanation=raw.get("explanation", ""),
            details=dict(raw.get("details") or {}),
            judge=dict(raw.get("judge") or {}),
            elapsed=float(raw.get("elapsed", 0.0)),
        )


@dataclass(frozen=True)
class WeightsConfig:
    """Answer-composite weights (normalized to sum 1) and the chunk relevance threshold."""

    w_faithfulness: float = 0.4
    w_relevance: float = 0.2
    w_completeness: float = 0.2
    w_clarity: float = 0.2
    tau: float = DEFAULT_TAU

    def __post_init__(self):
        raw = (self.w_faithfulness, self.w_relevance, self.w_completeness, self.w_clarity)
        if any(w < 0 for w in raw):
            raise ValueError("weights must be nonnegative")
        total = sum(raw)
        if total <= 0:
            raise ValueError("at least one weight must be positive")
        if abs(total - 1.0) > 1e-9:
            norm = tuple(w / total for w in raw)
            object.__setattr__(self, "w_faithfulness", norm[0])
            object.__setattr__(self, "w_relevance", norm[1])
            object.__setattr__(self, "w_completeness", norm[2])
            object.__setattr__(self, "w_clarity", norm[3])
        if not (0.0 < self.tau <= 1.0):
            raise ValueError("tau must lie in (0, 1]")

    def as_map(self) -> dict[str, float]:
        return {
            STRICT_FAITHFULNESS: self.w_faithfulness,
            ANSWER_RELEVANCE: self.w_relevance,
            ANSWER_COMPLETENESS: self.w_completeness,
            CLARITY: self.w_clarity,
        }

    def to_dict(self) -> dict[str, float]:
        return {
            "w_faithfulness": self.w_faithfulness,
            "w_relevance": self.w_relevance,
            "w_completeness": self.w_completeness,
            "w_clarity": self.w_clarity,
            "tau": self.tau,
        }

    @classmethod
    def from_dict(cls, raw: Mapping[str, Any]) -> "WeightsConfig":
        return cls(
            w_faithfulness=float(raw.get("w_faithfulness", 0.4)),
            w_relevance=float(raw.get("w_relevance", 0.2)),
            w_completeness=float(raw.get("w_completeness", 0.2)),
            w_clarity=float(raw.get("w_clarity", 0.2)),
            tau=float(raw.get("tau", DEFAULT_TAU)),
        )
