"""Atomic question aspects, extracted once per item and shared across metrics."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Any

from ragvue.judge import JudgeConfig, JudgeProvider, JudgeRequest, resolve_provider
from ragvue.judge.templates import render
from ragvue.model import EvalItem

ASPECT_CAP = 10
FALLBACK_ASPECT_TEXT = "answer the question as stated"


@dataclass(frozen=True)
class Aspect:
    id: int
    text: str

    def to_dict(self) -> dict[str, Any]:
        return {"id": self.id, "text": self.text}


@dataclass(frozen=True)
class AspectSet:
    """The aspect decomposition of one item's question.

    ``fallback`` marks the substituted whole-question aspect used when the
    judge returned nothing.
    """

    item_id: str
    aspects: tuple[Aspect, ...]
    source: dict[str, Any]
    fallback: bool = False

    def __post_init__(self):
        if not (1 <= len(self.aspects) <= ASPECT_CAP):
            raise ValueError(f"aspect count must lie in [1, {ASPECT_CAP}]")
        if any(not a.text.strip() for a in self.aspects):
            raise ValueError("aspect texts must be non-empty")
        if [a.id for a in self.aspects] != list(range(len(self.aspects))):
            raise ValueError("aspect ids must be contiguous from 0")

    @property
    def texts(self) -> list[str]:
        return [a.text for a in self.aspects]

    def __len__(self) -> int:
        return len(self.aspects)

    def to_dict(self) -> dict[str, Any]:
        return {
            "item_id": self.item_id,
            "aspects": [a.to_dict() for a in self.aspects],
            "source": self.source,
            "fallback": self.fallback,
        }


class AspectCache:
    """Per-run concurrent aspect cache with first-writer-wins semantics."""

    def __init__(self):
        self._data: dict[tuple[str, str, float], AspectSet] = {}
        self._lock = threading.Lock()

    @staticmethod
    def key(item: EvalItem, config: JudgeConfig) -> tuple[str, str, float]:
        return (item.id, config.model, config.temperature)

    def get(self, key: tuple[str, str, float]) -> AspectSet | None:
        with self._lock:
            return self._data.get(key)

    def put(self, key: tuple[str, str, float], value: AspectSet) -> AspectSet:
        with self._lock:
            return self._data.setdefault(key, value)


def aspects_request(item: EvalItem) -> JudgeRequest:
    """The aspect-extraction request; rendered from the question alone."""
    return JudgeRequest(
        metric="aspects",
        instruction=render("aspects", question=item.question),
        schema="aspects",
        item_id=item.id,
        inputs={"question": item.question},
    )


def extract_aspects(
    item: EvalItem,
    judge: JudgeConfig | JudgeProvider | None = None,
    cache: AspectCache | None = None,
) -> AspectSet:
    """Extract (or fetch from cache) the aspect set for an item's question."""
    provider = resolve_provider(judge)
    key = AspectCache.key(item, provider.config)
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            return hit
    response = provider.complete(aspects_request(item))
    texts = [t.strip() for t in response.parsed["aspects"][:ASPECT_CAP]]
    fallback = not texts
    if fallback:
        texts = [FALLBACK_ASPECT_TEXT]
    aspect_set = AspectSet(
        item_id=item.id,
        aspects=tuple(Aspect(i, t) for i, t in enumerate(texts)),
        source=provider.config.snapshot(),
        fallback=fallback,
    )
    if cache is not None:
        return cache.put(key, aspect_set)
    return aspect_set
