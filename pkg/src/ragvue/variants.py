"""Desk-scale corpus construction: five templated answer variants per source question."""

from __future__ import annotations

import json
import re
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Mapping

from ragvue.model import EvalItem

VARIANT_KINDS = ("ideal", "partial", "unclear", "off_topic", "hallucinated")

HEDGING_PHRASE = "It is hard to say"
UNSUPPORTED_PHRASE = "even though there is no strong supporting evidence"

# Deliberately bland, proper-noun-free sentences so off-topic answers never
# leak into the question's topic.
OFF_TOPIC_BANK = (
    "The recipe calls for two cups of flour, a pinch of salt, and steady kneading.",
    "Morning traffic eases once the commuter lanes open after nine.",
    "A fresh coat of paint protects wooden fences from winter damp.",
    "Stretching before a run lowers the chance of pulled muscles.",
    "Most houseplants prefer indirect light and weekly watering.",
    "The ferry timetable changes with the tide twice a month.",
    "Keeping receipts in one folder makes tax season far less painful.",
    "A slow simmer brings out the sweetness in onions.",
)

_WIKI_LINK_RE = re.compile(r"\[\[(?:[^\]|]*\|)?([^\]|]*)\]\]")


class EmptyFacts(ValueError):
    def __init__(self, qid: str):
        self.qid = qid
        super().__init__(f"source record {qid!r} has no usable supporting facts")


@dataclass(frozen=True)
class SourceRecord:
    """One multihop source question with its reference label and support."""

    qid: str
    question: str
    reference_label: str
    facts: tuple[str, ...]
    decomposition: tuple[str, ...] = ()
    evidence_titles: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.qid.strip():
            raise ValueError("qid must be non-empty")
        if not self.question.strip():
            raise ValueError("question must be non-empty")
        if self.reference_label not in ("yes", "no"):
            raise ValueError("reference_label must be 'yes' or 'no'")
        if not self.facts:
            raise EmptyFacts(self.qid)

    @classmethod
    def from_dict(cls, raw: Mapping[str, Any]) -> "SourceRecord":
        return cls(
            qid=str(raw["qid"]),
            question=str(raw["question"]),
            reference_label=str(raw.get("reference_label", "")).strip().lower(),
            facts=tuple(str(f) for f in raw.get("facts", ())),
            decomposition=tuple(str(s) for s in raw.get("decomposition", ())),
            evidence_titles=tuple(str(t) for t in raw.get("evidence_titles", ())),
        )


def load_source_records(path: str | Path) -> list[SourceRecord]:
    """Read a JSON array of source records."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, list):
        raise ValueError("source file must contain a JSON array of records")
    return [SourceRecord.from_dict(entry) for entry in raw]


def clean_fact(text: str) -> str:
    """Trim, collapse whitespace, and strip wiki link markup; idempotent."""
    text = _WIKI_LINK_RE.sub(r"\1", text)
    return re.sub(r"\s+", " ", text).strip()


def _sentence(text: str) -> str:
    return text if text.endswith((".", "!", "?")) else text + "."


def _answers(record: SourceRecord, facts: list[str]) -> dict[str, str]:
    yes = record.reference_label == "yes"
    label = "Yes" if yes else "No"
    flipped = "No" if yes else "Yes"
    stitched = " ".join(_sentence(f) for f in facts)
    return {
        "ideal": f"{label}. {stitched}",
        "partial": f"{label}. {_sentence(facts[0])}",
        "unclear": (
            f"{HEDGING_PHRASE}... probably {'true' if yes else 'false'}. "
            "The evidence is not entirely clear."
        ),
        "off_topic": OFF_TOPIC_BANK[zlib.crc32(record.qid.encode("utf-8")) % len(OFF_TOPIC_BANK)],
        "hallucinated": f"{flipped}, {UNSUPPORTED_PHRASE} for this conclusion.",
    }


def build_variants(record: SourceRecord) -> list[EvalItem]:
    """Produce the five answer-variant items for one record.

    All five share the record's question and cleaned facts as contexts; only
    the answer and the kind metadata differ.
    """
    facts = [clean_fact(f) for f in record.facts]
    facts = [f for f in facts if f]
    if not facts:
        raise EmptyFacts(record.qid)
    answers = _answers(record, facts)
    items = []
    for kind in VARIANT_KINDS:
        items.append(
            EvalItem.create(
                question=record.question,
                answer=answers[kind],
                contexts=facts,
                id=f"{record.qid}-{kind}",
                metadata={
                    "qid": record.qid,
                    "kind": kind,
                    "reference_label": record.reference_label,
                    "decomposition": json.dumps(list(record.decomposition), ensure_ascii=False),
                    "evidence_titles": json.dumps(list(record.evidence_titles), ensure_ascii=False),
                },
            )
        )
    return items


def build_corpus(records: Iterable[SourceRecord]) -> list[EvalItem]:
    items: list[EvalItem] = []
    for record in records:
        items.extend(build_variants(record))
    return items


def write_jsonl(items: Iterable[EvalItem], path: str | Path) -> Path:
    """Write items in the engine's JSONL input format."""
    out = Path(path)
    lines = [json.dumps(item.to_dict(), ensure_ascii=False) for item in items]
    out.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return out
