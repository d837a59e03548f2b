"""Shared test fixtures: items, scripted judges, and showcase source records."""

from __future__ import annotations

import threading
from collections import Counter

import pytest

from ragvue.judge import JudgeRequest, JudgeResponse, offline_judge
from ragvue.model import EvalItem
from ragvue.variants import SourceRecord


def make_item(
    question: str = "What year did the expedition reach the summit?",
    answer: str | None = "The expedition reached the summit in 1953.",
    contexts: tuple[str, ...] = ("The expedition reached the summit in 1953.",),
    item_id: str = "item-0",
) -> EvalItem:
    return EvalItem.create(question=question, answer=answer, contexts=contexts, id=item_id)


def chunk_payload(scores: list[float]) -> dict:
    return {
        "chunks": [
            {"index": i, "score": s, "rationale": f"scripted score {s}"}
            for i, s in enumerate(scores)
        ]
    }


def aspects_payload(texts: list[str]) -> dict:
    return {"aspects": list(texts)}


def coverage_payload(flags: list[bool]) -> dict:
    return {
        "verdicts": [
            {
                "aspect_id": i,
                "covered": bool(f),
                "evidence": "supporting chunk snippet" if f else None,
                "source": 0 if f else None,
            }
            for i, f in enumerate(flags)
        ]
    }


def completeness_payload(flags: list[bool]) -> dict:
    return {
        "verdicts": [
            {
                "aspect_id": i,
                "covered": bool(f),
                "evidence": None,
                "source": "answer span" if f else None,
            }
            for i, f in enumerate(flags)
        ]
    }


def clarity_payload(score: float, explanation: str = "scripted clarity", suggestions=()) -> dict:
    return {"score": score, "explanation": explanation, "suggestions": list(suggestions)}


def relevance_payload(score: float, missing=(), off_topic=(), explanation="scripted relevance") -> dict:
    return {
        "score": score,
        "explanation": explanation,
        "missing_parts": list(missing),
        "off_topic_parts": list(off_topic),
    }


def claims_payload(labels: list[str]) -> dict:
    claims = []
    for i, label in enumerate(labels):
        claims.append({
            "text": f"scripted claim {i}",
            "label": label,
            "evidence": "scripted evidence" if label == "supported" else None,
            "violation": None if label == "supported" else "unsupported: scripted",
        })
    return {"claims": claims}


def scripted_judge(payloads: dict) -> object:
    """Fixture judge from a {metric/item_id: payload} mapping."""
    return offline_judge("fixture", fixture=payloads)


class CountingJudge:
    """Wraps a provider and counts calls per schema (thread-safe)."""

    def __init__(self, inner):
        self.inner = inner
        self.config = inner.config
        self.calls: Counter[str] = Counter()
        self._lock = threading.Lock()

    def complete(self, request: JudgeRequest) -> JudgeResponse:
        with self._lock:
            self.calls[request.schema] += 1
            self.calls["total"] += 1
        return self.inner.complete(request)


class CapturingJudge:
    """Wraps a provider and records validated payloads keyed by metric/item_id."""

    def __init__(self, inner):
        self.inner = inner
        self.config = inner.config
        self.captured: dict[str, dict] = {}
        self._lock = threading.Lock()

    def complete(self, request: JudgeRequest) -> JudgeResponse:
        response = self.inner.complete(request)
        with self._lock:
            self.captured[f"{request.metric}/{request.item_id}"] = response.parsed
        return response


RECORD_GENGHIS = SourceRecord(
    qid="genghis-khan-descendants",
    question="Are more people today related to Genghis Khan than Julius Caesar?",
    reference_label="yes",
    facts=(
        "Genghis Khan fathered many children and his male line is estimated to include millions of living descendants.",
        "Julius Caesar had one legitimate son, who left no documented line of living descendants.",
        "Genetic studies trace an unusually common Y chromosome lineage to lands once ruled by Genghis Khan.",
    ),
    decomposition=(
        "How many living descendants does Genghis Khan have?",
        "How many living descendants does Julius Caesar have?",
    ),
    evidence_titles=("Descent from Genghis Khan", "Julius Caesar"),
)

RECORD_POLICE = SourceRecord(
    qid="the-police-arrests",
    question="Could the members of The Police perform lawful arrests?",
    reference_label="no",
    facts=(
        "The Police were an English rock band formed in London in 1977.",
        "Lawful arrests are performed by sworn law enforcement officers.",
        "Musicians hold no arrest powers beyond those of ordinary citizens.",
    ),
    decomposition=(
        "Who were the members of The Police?",
        "Who may perform lawful arrests?",
    ),
    evidence_titles=("The Police", "Arrest"),
)

RECORD_SEAL = SourceRecord(
    qid="dog-seal-bell",
    question="Would a dog respond to a bell before a grey seal?",
    reference_label="yes",
    facts=(
        "Dogs react to familiar airborne sounds such as bells within fractions of a second.",
        "Grey seals rely mostly on underwater hearing and respond slowly to airborne sounds.",
    ),
    decomposition=(
        "How quickly do dogs respond to bells?",
        "How quickly do grey seals respond to airborne sounds?",
    ),
    evidence_titles=("Dog", "Grey seal"),
)

SHOWCASE_RECORDS = (RECORD_GENGHIS, RECORD_POLICE, RECORD_SEAL)


@pytest.fixture
def full_item() -> EvalItem:
    return make_item()
