"""Loading and rendering of the versioned prompt template files."""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path
from string import Template
from typing import Iterable

_DIR = Path(__file__).parent / "templates"

#: template id -> shipped file (the filename carries the template version).
TEMPLATE_FILES = {
    "retrieval_relevance": "retrieval_relevance.v1.txt",
    "aspects": "aspects.v1.txt",
    "retrieval_coverage": "retrieval_coverage.v1.txt",
    "clarity": "clarity.v1.txt",
    "answer_relevance": "answer_relevance.v1.txt",
    "answer_completeness": "answer_completeness.v1.txt",
    "strict_faithfulness": "strict_faithfulness.v1.txt",
}


def template_version(name: str) -> str:
    stem = TEMPLATE_FILES[name].rsplit(".", 2)[-2]
    return stem


@lru_cache(maxsize=None)
def template_text(name: str) -> str:
    path = _DIR / TEMPLATE_FILES[name]
    return path.read_text(encoding="utf-8")


def numbered_block(lines: Iterable[str]) -> str:
    """Render texts as a 1-based numbered block, one entry per line."""
    return "\n".join(f"[{i}] {text}" for i, text in enumerate(lines, start=1))


def render(name: str, **fields: str) -> str:
    """Substitute fields into a template; unknown placeholders are an error."""
    return Template(template_text(name)).substitute(**fields)
