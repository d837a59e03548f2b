"""HTTP chat-completion judge with schema validation and bounded retries."""

from __future__ import annotations

import json
import os
import threading
from typing import Any, Callable

import requests

from ragvue.judge import schemas
from ragvue.judge.types import (
    JudgeConfig,
    JudgeRequest,
    JudgeResponse,
    SchemaViolation,
    Timeout,
    Transport,
)

API_KEY_ENV = "RAGVUE_API_KEY"

_DEFAULT_MAX_IN_FLIGHT = 8
_inflight = threading.BoundedSemaphore(_DEFAULT_MAX_IN_FLIGHT)


def set_max_in_flight(limit: int) -> None:
    """Adjust the global bound on concurrent judge requests."""
    global _inflight
    if limit < 1:
        raise ValueError("limit must be >= 1")
    _inflight = threading.BoundedSemaphore(limit)


def _requests_transport(url: str, payload: dict, headers: dict, timeout: float) -> tuple[int, str]:
    resp = requests.post(url, json=payload, headers=headers, timeout=timeout)
    return resp.status_code, resp.text


def _extract_json(text: str) -> Any:
    text = (text or "").strip()
    try:
        return json.loads(text)
    except ValueError:
        pass
    start, end = text.find("{"), text.rfind("}")
    if start != -1 and end > start:
        return json.loads(text[start : end + 1])
    raise ValueError("no JSON document found in judge reply")


class HttpJudge:
    """Chat-completion provider: one user message carrying the instruction.

    Malformed or schema-violating replies are re-asked up to
    config.max_retries times with the validation error appended; transport
    failures retry on the same budget.
    """

    def __init__(
        self,
        config: JudgeConfig,
        api_key: str | None = None,
        transport: Callable[[str, dict, dict, float], tuple[int, str]] | None = None,
    ):
        if config.provider != "http":
            raise ValueError("HttpJudge requires an http judge config")
        self.config = config
        self._api_key = api_key
        self._transport = transport or _requests_transport

    def with_temperature(self, temperature: float) -> "HttpJudge":
        cfg = JudgeConfig(**{**self.config.snapshot(), "temperature": temperature})
        return HttpJudge(cfg, api_key=self._api_key, transport=self._transport)

    def _headers(self) -> dict[str, str]:
        key = self._api_key if self._api_key is not None else os.environ.get(API_KEY_ENV, "")
        headers = {"Content-Type": "application/json"}
        if key:
            headers["Authorization"] = f"Bearer {key}"
        return headers

    def complete(self, request: JudgeRequest) -> JudgeResponse:
        if request.schema not in schemas.VALIDATORS:
            raise SchemaViolation(f"unknown response schema {request.schema!r}")
        cfg = self.config
        instruction = request.instruction
        last_error: Exception | None = None
        attempts = 0
        for attempt in range(cfg.max_retries + 1):
            attempts = attempt + 1
            payload = {
                "model": cfg.model,
                "temperature": cfg.temperature,
                "messages": [{"role": "user", "content": instruction}],
            }
            try:
                with _inflight:
                    status, body = self._transport(cfg.endpoint, payload, self._headers(), cfg.timeout)
            except requests.Timeout:
                last_error = Timeout(f"judge request timed out after {cfg.timeout}s")
                continue
            except requests.RequestException as exc:
                last_error = Transport(0, str(exc))
                continue
            if not (200 <= status < 300):
                last_error = Transport(status, body)
                continue
            try:
                doc = json.loads(body)
                content = doc["choices"][0]["message"]["content"]
                parsed = schemas.validate(request.schema, _extract_json(content))
            except (SchemaViolation, ValueError, KeyError, IndexError, TypeError) as exc:
                detail = exc.detail if isinstance(exc, SchemaViolation) else str(exc)
                last_error = exc if isinstance(exc, SchemaViolation) else SchemaViolation(detail)
                instruction = (
                    request.instruction
                    + "\n\nYour previous reply was rejected: "
                    + detail
                    + "\nReply again with only the valid JSON document."
                )
                continue
            return JudgeResponse(raw=content, parsed=parsed, attempts=attempts)
        assert last_error is not None
        raise last_error
