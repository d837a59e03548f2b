"""Validation of structured judge replies, one validator per response schema.

Out-of-range numbers are rejected, never clamped; labels come from closed
enums. Validators return a normalized copy of the payload.
"""

from __future__ import annotations

from typing import Any

from ragvue.judge.types import SchemaViolation

CLAIM_LABELS = ("supported", "partially_hallucinated", "fully_hallucinated")
VIOLATION_REASONS = ("entity mismatch", "temporal mismatch", "unsupported", "contradiction")


def _obj(payload: Any, where: str) -> dict:
    if not isinstance(payload, dict):
        raise SchemaViolation(f"{where}: expected a JSON object, got {type(payload).__name__}")
    return payload


def _list(value: Any, where: str) -> list:
    if not isinstance(value, list):
        raise SchemaViolation(f"{where}: expected a list")
    return value


def _score01(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaViolation(f"{where}: score must be a number")
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise SchemaViolation(f"{where}: score {value} outside [0, 1]")
    return value


def _string(value: Any, where: str, *, allow_empty: bool = True) -> str:
    if not isinstance(value, str):
        raise SchemaViolation(f"{where}: expected a string")
    if not allow_empty and not value.strip():
        raise SchemaViolation(f"{where}: must be non-empty")
    return value


def _opt_string(value: Any, where: str) -> str | None:
    if value is None:
        return None
    s = _string(value, where)
    return s if s.strip() else None


def _string_list(value: Any, where: str) -> list[str]:
    return [_string(v, f"{where}[{i}]") for i, v in enumerate(_list(value, where))]


def _index(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaViolation(f"{where}: expected an integer index")
    if value < 0:
        raise SchemaViolation(f"{where}: index must be >= 0")
    return value


def _bool(value: Any, where: str) -> bool:
    if not isinstance(value, bool):
        raise SchemaViolation(f"{where}: expected a boolean")
    return value


def validate_chunk_scores(payload: Any) -> dict[str, Any]:
    payload = _obj(payload, "chunk_scores")
    chunks = []
    for i, entry in enumerate(_list(payload.get("chunks"), "chunk_scores.chunks")):
        entry = _obj(entry, f"chunks[{i}]")
        chunks.append({
            "index": _index(entry.get("index"), f"chunks[{i}].index"),
            "score": _score01(entry.get("score"), f"chunks[{i}].score"),
            "rationale": _string(entry.get("rationale", ""), f"chunks[{i}].rationale"),
        })
    return {"chunks": chunks}


def validate_aspects(payload: Any) -> dict[str, Any]:
    payload = _obj(payload, "aspects")
    aspects = _string_list(payload.get("aspects"), "aspects.aspects")
    for i, text in enumerate(aspects):
        if not text.strip():
            raise SchemaViolation(f"aspects[{i}]: must be non-empty")
    return {"aspects": aspects}


def _validate_verdicts(payload: Any, *, coverage_mode: bool) -> dict[str, Any]:
    name = "aspect_coverage" if coverage_mode else "aspect_completeness"
    payload = _obj(payload, name)
    verdicts = []
    for i, entry in enumerate(_list(payload.get("verdicts"), f"{name}.verdicts")):
        entry = _obj(entry, f"verdicts[{i}]")
        covered = _bool(entry.get("covered"), f"verdicts[{i}].covered")
        evidence = _opt_string(entry.get("evidence"), f"verdicts[{i}].evidence")
        source = entry.get("source")
        if coverage_mode:
            if covered:
                if not evidence:
                    raise SchemaViolation(f"verdicts[{i}]: covered aspect needs non-empty evidence")
                source = _index(source, f"verdicts[{i}].source")
            else:
                source = None if source is None else _index(source, f"verdicts[{i}].source")
        else:
            source = _opt_string(source, f"verdicts[{i}].source")
        verdicts.append({
            "aspect_id": _index(entry.get("aspect_id"), f"verdicts[{i}].aspect_id"),
            "covered": covered,
            "evidence": evidence,
            "source": source,
        })
    return {"verdicts": verdicts}


def validate_aspect_coverage(payload: Any) -> dict[str, Any]:
    return _validate_verdicts(payload, coverage_mode=True)


def validate_aspect_completeness(payload: Any) -> dict[str, Any]:
    return _validate_verdicts(payload, coverage_mode=False)


def validate_clarity(payload: Any) -> dict[str, Any]:
    payload = _obj(payload, "clarity")
    return {
        "score": _score01(payload.get("score"), "clarity.score"),
        "explanation": _string(payload.get("explanation"), "clarity.explanation", allow_empty=False),
        "suggestions": _string_list(payload.get("suggestions", []), "clarity.suggestions"),
    }


def validate_answer_relevance(payload: Any) -> dict[str, Any]:
    payload = _obj(payload, "answer_relevance")
    score = _score01(payload.get("score"), "answer_relevance.score")
    missing = _string_list(payload.get("missing_parts", []), "answer_relevance.missing_parts")
    off_topic = _string_list(payload.get("off_topic_parts", []), "answer_relevance.off_topic_parts")
    if score == 1.0 and (missing or off_topic):
        raise SchemaViolation("answer_relevance: score 1.0 requires empty missing/off-topic lists")
    return {
        "score": score,
        "explanation": _string(payload.get("explanation", ""), "answer_relevance.explanation"),
        "missing_parts": missing,
        "off_topic_parts": off_topic,
    }


def validate_claim_analysis(payload: Any) -> dict[str, Any]:
    payload = _obj(payload, "claim_analysis")
    claims = []
    for i, entry in enumerate(_list(payload.get("claims"), "claim_analysis.claims")):
        entry = _obj(entry, f"claims[{i}]")
        label = _string(entry.get("label"), f"claims[{i}].label")
        if label not in CLAIM_LABELS:
            raise SchemaViolation(f"claims[{i}].label: {label!r} not one of {CLAIM_LABELS}")
        evidence = _opt_string(entry.get("evidence"), f"claims[{i}].evidence")
        violation = _opt_string(entry.get("violation"), f"claims[{i}].violation")
        if label == "supported":
            if not evidence:
                raise SchemaViolation(f"claims[{i}]: supported claim needs non-empty evidence")
            if violation:
                raise SchemaViolation(f"claims[{i}]: supported claim must not carry a violation")
        else:
            if not violation:
                raise SchemaViolation(f"claims[{i}]: hallucinated claim needs a violation reason")
            if not violation.startswith(VIOLATION_REASONS):
                raise SchemaViolation(
                    f"claims[{i}].violation: must start with one of {VIOLATION_REASONS}"
                )
        claims.append({
            "text": _string(entry.get("text"), f"claims[{i}].text", allow_empty=False),
            "label": label,
            "evidence": evidence,
            "violation": violation,
        })
    return {"claims": claims}


VALIDATORS = {
    "chunk_scores": validate_chunk_scores,
    "aspects": validate_aspects,
    "aspect_coverage": validate_aspect_coverage,
    "aspect_completeness": validate_aspect_completeness,
    "clarity": validate_clarity,
    "answer_relevance": validate_answer_relevance,
    "claim_analysis": validate_claim_analysis,
}

SCHEMA_IDS = tuple(VALIDATORS)


def validate(schema: str, payload: Any) -> dict[str, Any]:
    """Validate a parsed judge payload against a registered schema."""
    try:
        validator = VALIDATORS[schema]
    except KeyError:
        raise SchemaViolation(f"unknown response schema {schema!r}") from None
    return validator(payload)
