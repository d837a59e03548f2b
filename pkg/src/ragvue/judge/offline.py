"""Deterministic offline judges: fixture replay and lexical heuristics."""

from __future__ import annotations

import copy
import json
from pathlib import Path
from typing import Any, Mapping

from ragvue.judge import lexical, schemas
from ragvue.judge.types import (
    OFFLINE_FIXTURE,
    OFFLINE_LEXICAL,
    JudgeConfig,
    JudgeRequest,
    JudgeResponse,
    MissingFixture,
    SchemaViolation,
)


def fixture_key(metric: str, item_id: str) -> str:
    return f"{metric}/{item_id}"


class FixtureJudge:
    """Replays canned payloads keyed by "metric/item_id"; never retries."""

    def __init__(self, fixture: Mapping[str, Any] | str | Path, config: JudgeConfig | None = None):
        if isinstance(fixture, (str, Path)):
            with open(fixture, encoding="utf-8") as fh:
                data = json.load(fh)
        else:
            data = dict(fixture)
        if not isinstance(data, Mapping):
            raise ValueError("fixture document must be a JSON object")
        self._fixture = dict(data)
        self.config = config or JudgeConfig(provider="offline", model=OFFLINE_FIXTURE)

    def with_temperature(self, temperature: float) -> "FixtureJudge":
        clone = FixtureJudge.__new__(FixtureJudge)
        clone._fixture = self._fixture
        clone.config = JudgeConfig(**{**self.config.snapshot(), "temperature": temperature})
        return clone

    def complete(self, request: JudgeRequest) -> JudgeResponse:
        key = fixture_key(request.metric, request.item_id)
        if key not in self._fixture:
            raise MissingFixture(request.metric, request.item_id)
        payload = copy.deepcopy(self._fixture[key])
        parsed = schemas.validate(request.schema, payload)
        return JudgeResponse(raw=json.dumps(payload, ensure_ascii=False), parsed=parsed, attempts=1)


class LexicalJudge:
    """Computes heuristic payloads from the request's structured inputs."""

    def __init__(self, config: JudgeConfig | None = None):
        self.config = config or JudgeConfig(provider="offline", model=OFFLINE_LEXICAL)

    def with_temperature(self, temperature: float) -> "LexicalJudge":
        return LexicalJudge(JudgeConfig(**{**self.config.snapshot(), "temperature": temperature}))

    def _build(self, request: JudgeRequest) -> dict[str, Any]:
        inputs = request.inputs
        question = inputs.get("question", "")
        answer = inputs.get("answer", "")
        contexts = list(inputs.get("contexts", ()))
        aspects = list(inputs.get("aspects", ()))
        schema = request.schema
        if schema == "chunk_scores":
            return lexical.build_chunk_scores(question, contexts)
        if schema == "aspects":
            return lexical.build_aspects(question)
        if schema == "aspect_coverage":
            return lexical.build_coverage(aspects, contexts)
        if schema == "aspect_completeness":
            return lexical.build_completeness(aspects, answer)
        if schema == "clarity":
            return lexical.build_clarity(answer)
        if schema == "answer_relevance":
            return lexical.build_answer_relevance(question, answer)
        if schema == "claim_analysis":
            return {"claims": lexical.analyze_claims(answer, contexts)}
        raise SchemaViolation(f"lexical judge cannot produce schema {schema!r}")

    def complete(self, request: JudgeRequest) -> JudgeResponse:
        payload = self._build(request)
        parsed = schemas.validate(request.schema, payload)
        return JudgeResponse(raw=json.dumps(payload, ensure_ascii=False), parsed=parsed, attempts=1)


def offline_judge(
    mode: str = "lexical",
    *,
    fixture: Mapping[str, Any] | str | Path | None = None,
    config: JudgeConfig | None = None,
):
    """Build an offline provider; fixture mode requires a fixture document or path."""
    if mode == "lexical":
        return LexicalJudge(config)
    if mode == "fixture":
        if fixture is None:
            raise ValueError("fixture mode requires a fixture mapping or file path")
        return FixtureJudge(fixture, config)
    raise ValueError(f"unknown offline judge mode {mode!r}")
