"""Pluggable LLM judge backends with schema-validated structured output."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Mapping, Protocol, runtime_checkable

from ragvue.judge.http import API_KEY_ENV, HttpJudge, set_max_in_flight
from ragvue.judge.offline import FixtureJudge, LexicalJudge, fixture_key, offline_judge
from ragvue.judge.schemas import SCHEMA_IDS, validate
from ragvue.judge.types import (
    OFFLINE_FIXTURE,
    OFFLINE_LEXICAL,
    JudgeConfig,
    JudgeError,
    JudgeRequest,
    JudgeResponse,
    MissingFixture,
    SchemaViolation,
    Timeout,
    Transport,
)


@runtime_checkable
class JudgeProvider(Protocol):
    config: JudgeConfig

    def complete(self, request: JudgeRequest) -> JudgeResponse: ...


def build_provider(
    config: JudgeConfig,
    *,
    api_key: str | None = None,
    fixture: Mapping[str, Any] | str | Path | None = None,
) -> JudgeProvider:
    """Construct the provider a config describes."""
    if config.provider == "http":
        return HttpJudge(config, api_key=api_key)
    if config.model == OFFLINE_FIXTURE:
        if fixture is None:
            raise ValueError("offline fixture judge requires a fixture document or path")
        return FixtureJudge(fixture, config)
    return LexicalJudge(config)


def resolve_provider(
    judge: JudgeConfig | JudgeProvider | None,
    *,
    api_key: str | None = None,
    fixture: Mapping[str, Any] | str | Path | None = None,
) -> JudgeProvider:
    """Accept a config or a ready provider; default to the lexical judge."""
    if judge is None:
        return LexicalJudge()
    if isinstance(judge, JudgeConfig):
        return build_provider(judge, api_key=api_key, fixture=fixture)
    return judge


def complete(config: JudgeConfig | JudgeProvider, request: JudgeRequest) -> JudgeResponse:
    """One schema-validated judge call against the given config or provider."""
    return resolve_provider(config).complete(request)


__all__ = [
    "API_KEY_ENV",
    "FixtureJudge",
    "HttpJudge",
    "JudgeConfig",
    "JudgeError",
    "JudgeProvider",
    "JudgeRequest",
    "JudgeResponse",
    "LexicalJudge",
    "MissingFixture",
    "OFFLINE_FIXTURE",
    "OFFLINE_LEXICAL",
    "SCHEMA_IDS",
    "SchemaViolation",
    "Timeout",
    "Transport",
    "build_provider",
    "complete",
    "fixture_key",
    "offline_judge",
    "resolve_provider",
    "set_max_in_flight",
    "validate",
]
