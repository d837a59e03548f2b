"""Judge configuration, request/response records, and judge error types."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

PROVIDERS = ("http", "offline")

#: Offline model-id conventions understood by the provider factory.
OFFLINE_LEXICAL = "lexical"
OFFLINE_FIXTURE = "fixture"


class JudgeError(Exception):
    """Base for all judge transport and validation failures."""


class Transport(JudgeError):
    def __init__(self, status: int, body: str):
        self.status = status
        self.body = body
        super().__init__(f"judge endpoint returned HTTP {status}: {body[:300]}")


class Timeout(JudgeError):
    pass


class SchemaViolation(JudgeError):
    def __init__(self, detail: str):
        self.detail = detail
        super().__init__(f"judge response violates schema: {detail}")


class MissingFixture(JudgeError):
    def __init__(self, metric: str, item_id: str):
        self.metric = metric
        self.item_id = item_id
        super().__init__(f"no fixture payload for key {metric}/{item_id}")


@dataclass(frozen=True)
class JudgeConfig:
    """One evaluator configuration: provider, model id, and decoding settings."""

    provider: str = "offline"
    model: str = OFFLINE_LEXICAL
    temperature: float = 0.0
    endpoint: str | None = None
    timeout: float = 30.0
    max_retries: int = 2

    def __post_init__(self):
        if self.provider not in PROVIDERS:
            raise ValueError(f"provider must be one of {PROVIDERS}, got {self.provider!r}")
        if not self.model:
            raise ValueError("model id must be non-empty")
        if not (0.0 <= self.temperature <= 2.0):
            raise ValueError("temperature must lie in [0, 2]")
        if self.provider == "http" and not self.endpoint:
            raise ValueError("http provider requires an endpoint URL")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")

    def snapshot(self) -> dict[str, Any]:
        """Serializable view of the config; never contains credentials."""
        return {
            "provider": self.provider,
            "model": self.model,
            "temperature": self.temperature,
            "endpoint": self.endpoint,
            "timeout": self.timeout,
            "max_retries": self.max_retries,
        }

    @classmethod
    def from_dict(cls, raw: Mapping[str, Any]) -> "JudgeConfig":
        return cls(
            provider=raw.get("provider", "offline"),
            model=raw.get("model", OFFLINE_LEXICAL),
            temperature=float(raw.get("temperature", 0.0)),
            endpoint=raw.get("endpoint"),
            timeout=float(raw.get("timeout", 30.0)),
            max_retries=int(raw.get("max_retries", 2)),
        )


@dataclass(frozen=True)
class JudgeRequest:
    """A rendered instruction plus the schema its reply must satisfy.

    ``inputs`` is the structured view of what the instruction was rendered
    from; offline providers consume it so they stay pure functions of the
    request. HTTP providers send only the instruction text.
    """

    metric: str
    instruction: str
    schema: str
    item_id: str
    inputs: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.instruction.strip():
            raise ValueError("instruction must be non-empty")
        if not self.schema:
            raise ValueError("schema id must be non-empty")


@dataclass(frozen=True)
class JudgeResponse:
    raw: str
    parsed: dict[str, Any]
    attempts: int = 1

    def __post_init__(self):
        if self.attempts < 1:
            raise ValueError("attempts must be >= 1")
