"""The six per-case metrics computed over schema-validated judge payloads."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Any

from ragvue.aspects import AspectCache, AspectSet, extract_aspects
from ragvue.judge import (
    JudgeConfig,
    JudgeError,
    JudgeProvider,
    JudgeRequest,
    SchemaViolation,
    resolve_provider,
)
from ragvue.judge.templates import numbered_block, render
from ragvue.model import (
    ANSWER_COMPLETENESS,
    ANSWER_RELEVANCE,
    CLARITY,
    DEFAULT_TAU,
    PER_CASE_METRICS,
    RETRIEVAL_COVERAGE,
    RETRIEVAL_RELEVANCE,
    STRICT_FAITHFULNESS,
    EvalItem,
    MetricResult,
    UnknownMetric,
)

NO_CONTEXTS = "no contexts: this metric needs at least one retrieved chunk"
NO_ANSWER = "answer missing: this metric needs a non-empty answer"
NO_CLAIMS = "no factual claims: the answer decomposes into zero verifiable claims"


def band_for_score(score: float) -> str:
    """Relevance band for a chunk score; boundary values belong to the higher band."""
    if not (0.0 <= score <= 1.0):
        raise ValueError(f"chunk score {score} outside [0, 1]")
    if score >= 0.9:
        return "direct"
    if score >= 0.7:
        return "useful"
    if score >= 0.3:
        return "weak"
    return "irrelevant"


@dataclass(frozen=True)
class ChunkScore:
    index: int
    score: float
    band: str
    rationale: str

    def to_dict(self) -> dict[str, Any]:
        return {"index": self.index, "score": self.score, "band": self.band, "rationale": self.rationale}


@dataclass(frozen=True)
class AspectVerdict:
    aspect_id: int
    covered: bool
    evidence: str | None
    source: int | str | None

    def to_dict(self) -> dict[str, Any]:
        return {
            "aspect_id": self.aspect_id,
            "covered": self.covered,
            "evidence": self.evidence,
            "source": self.source,
        }


@dataclass(frozen=True)
class Claim:
    text: str
    label: str
    evidence: str | None
    violation: str | None

    def to_dict(self) -> dict[str, Any]:
        return {"text": self.text, "label": self.label, "evidence": self.evidence, "violation": self.violation}


@dataclass(frozen=True)
class RelevanceDiagnostics:
    missing_parts: tuple[str, ...]
    off_topic_parts: tuple[str, ...]

    def to_dict(self) -> dict[str, Any]:
        return {"missing_parts": list(self.missing_parts), "off_topic_parts": list(self.off_topic_parts)}


def _judged(provider: JudgeProvider) -> dict[str, Any]:
    return provider.config.snapshot()


def _run_call(metric: str, provider: JudgeProvider, request: JudgeRequest, started: float, compute):
    """Shared judge-call scaffold: errors become error-status results."""
    try:
        response = provider.complete(request)
        return compute(response)
    except JudgeError as exc:
        return MetricResult.error(
            metric,
            f"judge call failed: {exc}",
            judge=_judged(provider),
            elapsed=time.perf_counter() - started,
        )


def relevance_request(item: EvalItem) -> JudgeRequest:
    return JudgeRequest(
        metric=RETRIEVAL_RELEVANCE,
        instruction=render(
            "retrieval_relevance",
            question=item.question,
            contexts=numbered_block(item.contexts),
        ),
        schema="chunk_scores",
        item_id=item.id,
        inputs={"question": item.question, "contexts": item.contexts},
    )


def retrieval_relevance(
    item: EvalItem,
    judge: JudgeConfig | JudgeProvider | None = None,
    tau: float = DEFAULT_TAU,
) -> MetricResult:
    """Fraction of chunks whose judged score reaches tau (boundary inclusive)."""
    provider = resolve_provider(judge)
    started = time.perf_counter()
    if not item.has_contexts:
        return MetricResult.not_applicable(RETRIEVAL_RELEVANCE, NO_CONTEXTS, judge=_judged(provider))

    def compute(response):
        chunks = response.parsed["chunks"]
        n = len(item.contexts)
        if len(chunks) != n or [c["index"] for c in chunks] != list(range(n)):
            raise SchemaViolation(f"expected one score per chunk for {n} chunks, in index order")
        scored = [ChunkScore(c["index"], c["score"], band_for_score(c["score"]), c["rationale"]) for c in chunks]
        relevant = sum(1 for c in scored if c.score >= tau)
        score = relevant / n
        return MetricResult.ok(
            RETRIEVAL_RELEVANCE,
            score,
            f"{relevant} of {n} chunks scored at or above tau={tau:g}",
            details={
                "tau": tau,
                "chunk_count": n,
                "relevant_count": relevant,
                "chunks": [c.to_dict() for c in scored],
            },
            judge=_judged(provider),
            elapsed=time.perf_counter() - started,
        )

    return _run_call(RETRIEVAL_RELEVANCE, provider, relevance_request(item), started, compute)


def coverage_request(item: EvalItem, aspect_set: AspectSet) -> JudgeRequest:
    return JudgeRequest(
        metric=RETRIEVAL_COVERAGE,
        instruction=render(
            "retrieval_coverage",
            question=item.question,
            aspects=numbered_block(aspect_set.texts),
            contexts=numbered_block(item.contexts),
        ),
        schema="aspect_coverage",
        item_id=item.id,
        inputs={"question": item.question, "contexts": item.contexts, "aspects": aspect_set.texts},
    )


def _verdict_result(
    metric: str,
    item: EvalItem,
    aspect_set: AspectSet,
    provider: JudgeProvider,
    request: JudgeRequest,
    started: float,
    explanation_fmt: str,
) -> MetricResult:
    def compute(response):
        verdicts_raw = response.parsed["verdicts"]
        n = len(aspect_set)
        ids = [v["aspect_id"] for v in verdicts_raw]
        if len(verdicts_raw) != n or sorted(ids) != list(range(n)):
            raise SchemaViolation(f"expected one verdict per aspect for {n} aspects")
        verdicts = [AspectVerdict(v["aspect_id"], v["covered"], v["evidence"], v["source"]) for v in verdicts_raw]
        covered = sum(1 for v in verdicts if v.covered)
        score = covered / n
        return MetricResult.ok(
            metric,
            score,
            explanation_fmt.format(covered=covered, total=n),
            details={
                "aspect_count": n,
                "covered_count": covered,
                "aspects": aspect_set.texts,
                "fallback": aspect_set.fallback,
                "verdicts": [v.to_dict() for v in verdicts],
            },
            judge=_judged(provider),
            elapsed=time.perf_counter() - started,
        )

    return _run_call(metric, provider, request, started, compute)


def retrieval_coverage(
    item: EvalItem,
    aspect_set: AspectSet,
    judge: JudgeConfig | JudgeProvider | None = None,
) -> MetricResult:
    """Fraction of question aspects supported by at least one retrieved chunk."""
    provider = resolve_provider(judge)
    started = time.perf_counter()
    if not item.has_contexts:
        return MetricResult.not_applicable(RETRIEVAL_COVERAGE, NO_CONTEXTS, judge=_judged(provider))
    return _verdict_result(
        RETRIEVAL_COVERAGE,
        item,
        aspect_set,
        provider,
        coverage_request(item, aspect_set),
        started,
        "{covered} of {total} aspects supported by at least one retrieved chunk",
    )


def clarity_request(item: EvalItem) -> JudgeRequest:
    return JudgeRequest(
        metric=CLARITY,
        instruction=render("clarity", answer=item.answer or ""),
        schema="clarity",
        item_id=item.id,
        inputs={"answer": item.answer or ""},
    )


def clarity(item: EvalItem, judge: JudgeConfig | JudgeProvider | None = None) -> MetricResult:
    """Single judge call scoring the answer's linguistic quality."""
    provider = resolve_provider(judge)
    started = time.perf_counter()
    if not item.has_answer:
        return MetricResult.not_applicable(CLARITY, NO_ANSWER, judge=_judged(provider))

    def compute(response):
        parsed = response.parsed
        return MetricResult.ok(
            CLARITY,
            parsed["score"],
            parsed["explanation"],
            details={"suggestions": parsed["suggestions"]},
            judge=_judged(provider),
            elapsed=time.perf_counter() - started,
        )

    return _run_call(CLARITY, provider, clarity_request(item), started, compute)


def answer_relevance_request(item: EvalItem) -> JudgeRequest:
    return JudgeRequest(
        metric=ANSWER_RELEVANCE,
        instruction=render("answer_relevance", question=item.question, answer=item.answer or ""),
        schema="answer_relevance",
        item_id=item.id,
        inputs={"question": item.question, "answer": item.answer or ""},
    )


def answer_relevance(item: EvalItem, judge: JudgeConfig | JudgeProvider | None = None) -> MetricResult:
    """Intent alignment between question and answer; never consumes contexts."""
    provider = resolve_provider(judge)
    started = time.perf_counter()
    if not item.has_answer:
        return MetricResult.not_applicable(ANSWER_RELEVANCE, NO_ANSWER, judge=_judged(provider))

    def compute(response):
        parsed = response.parsed
        diag = RelevanceDiagnostics(tuple(parsed["missing_parts"]), tuple(parsed["off_topic_parts"]))
        return MetricResult.ok(
            ANSWER_RELEVANCE,
            parsed["score"],
            parsed["explanation"],
            details=diag.to_dict(),
            judge=_judged(provider),
            elapsed=time.perf_counter() - started,
        )

    return _run_call(ANSWER_RELEVANCE, provider, answer_relevance_request(item), started, compute)


def completeness_request(item: EvalItem, aspect_set: AspectSet) -> JudgeRequest:
    return JudgeRequest(
        metric=ANSWER_COMPLETENESS,
        instruction=render(
            "answer_completeness",
            aspects=numbered_block(aspect_set.texts),
            answer=item.answer or "",
        ),
        schema="aspect_completeness",
        item_id=item.id,
        inputs={"answer": item.answer or "", "aspects": aspect_set.texts},
    )


def answer_completeness(
    item: EvalItem,
    aspect_set: AspectSet,
    judge: JudgeConfig | JudgeProvider | None = None,
) -> MetricResult:
    """Fraction of question aspects the answer explicitly addresses."""
    provider = resolve_provider(judge)
    started = time.perf_counter()
    if not item.has_answer:
        return MetricResult.not_applicable(ANSWER_COMPLETENESS, NO_ANSWER, judge=_judged(provider))
    return _verdict_result(
        ANSWER_COMPLETENESS,
        item,
        aspect_set,
        provider,
        completeness_request(item, aspect_set),
        started,
        "{covered} of {total} aspects explicitly addressed by the answer",
    )


def decompose_and_verify_prompt(item: EvalItem) -> JudgeRequest:
    """The single claim-decomposition-plus-verification request for one item."""
    return JudgeRequest(
        metric=STRICT_FAITHFULNESS,
        instruction=render(
            "strict_faithfulness",
            answer=item.answer or "",
            contexts=numbered_block(item.contexts),
        ),
        schema="claim_analysis",
        item_id=item.id,
        inputs={"answer": item.answer or "", "contexts": item.contexts},
    )


def strict_faithfulness(item: EvalItem, judge: JudgeConfig | JudgeProvider | None = None) -> MetricResult:
    """Share of the answer's claims fully grounded in the retrieved context.

    One judge call decomposes the answer into minimal claims and labels each
    supported, partially hallucinated, or fully hallucinated; both
    hallucination labels count fully against the score.
    """
    provider = resolve_provider(judge)
    started = time.perf_counter()
    if not item.has_answer:
        return MetricResult.not_applicable(STRICT_FAITHFULNESS, NO_ANSWER, judge=_judged(provider))
    if not item.has_contexts:
        return MetricResult.not_applicable(STRICT_FAITHFULNESS, NO_CONTEXTS, judge=_judged(provider))

    def compute(response):
        claims = [Claim(c["text"], c["label"], c["evidence"], c["violation"]) for c in response.parsed["claims"]]
        if not claims:
            return MetricResult.not_applicable(
                STRICT_FAITHFULNESS, NO_CLAIMS,
                judge=_judged(provider), elapsed=time.perf_counter() - started,
            )
        supported = sum(1 for c in claims if c.label == "supported")
        partial = sum(1 for c in claims if c.label == "partially_hallucinated")
        full = sum(1 for c in claims if c.label == "fully_hallucinated")
        score = supported / len(claims)
        return MetricResult.ok(
            STRICT_FAITHFULNESS,
            score,
            f"{supported} of {len(claims)} claims fully grounded in the retrieved context",
            details={
                "claim_count": len(claims),
                "supported_count": supported,
                "partially_hallucinated_count": partial,
                "fully_hallucinated_count": full,
                "claims": [c.to_dict() for c in claims],
            },
            judge=_judged(provider),
            elapsed=time.perf_counter() - started,
        )

    return _run_call(STRICT_FAITHFULNESS, provider, decompose_and_verify_prompt(item), started, compute)


def run_metric(
    name: str,
    item: EvalItem,
    judge: JudgeConfig | JudgeProvider | None = None,
    *,
    tau: float = DEFAULT_TAU,
    aspect_cache: AspectCache | None = None,
) -> MetricResult:
    """Dispatch one per-case metric, extracting aspects when the metric needs them."""
    if name not in PER_CASE_METRICS:
        raise UnknownMetric(name)
    provider = resolve_provider(judge)
    if name == RETRIEVAL_RELEVANCE:
        return retrieval_relevance(item, provider, tau)
    if name == CLARITY:
        return clarity(item, provider)
    if name == ANSWER_RELEVANCE:
        return answer_relevance(item, provider)
    if name == STRICT_FAITHFULNESS:
        return strict_faithfulness(item, provider)
    # Coverage and completeness share the aspect set; check their own
    # preconditions before spending an extraction call.
    if name == RETRIEVAL_COVERAGE and not item.has_contexts:
        return MetricResult.not_applicable(RETRIEVAL_COVERAGE, NO_CONTEXTS, judge=_judged(provider))
    if name == ANSWER_COMPLETENESS and not item.has_answer:
        return MetricResult.not_applicable(ANSWER_COMPLETENESS, NO_ANSWER, judge=_judged(provider))
    try:
        aspect_set = extract_aspects(item, provider, aspect_cache)
    except JudgeError as exc:
        return MetricResult.error(name, f"aspect extraction failed: {exc}", judge=_judged(provider))
    if name == RETRIEVAL_COVERAGE:
        return retrieval_coverage(item, aspect_set, provider)
    return answer_completeness(item, aspect_set, provider)
