"""Deterministic text heuristics behind the offline lexical judge.

Chunk relevance is banded question/chunk token overlap; aspects come from a
clause split of the question; claims are answer sentences verified by exact
surface-form matching of capitalized entity spans and 4-digit years against
the context chunks.
"""

from __future__ import annotations

import re

WORD_RE = re.compile(r"[A-Za-z][A-Za-z'\-]*|\d+")
YEAR_RE = re.compile(r"\b[12][0-9]{3}\b")
SENTENCE_SPLIT_RE = re.compile(r"(?<=[.!?])\s+(?=[\"'(]?[A-Z0-9])")
CLAUSE_SPLIT_RE = re.compile(
    r";|,|\band\b|\bor\b|\bthan\b|\bbefore\b|\bafter\b|\bversus\b|\bvs\.?\b|\bwhile\b|\bwhereas\b"
)

# Function words and sentence starters; capitalized occurrences of these are
# not treated as entity tokens.
STOPWORDS = frozenset("""
a about above after again against all also although am an and any are as at
be because been before being below between both but by can cannot could did
do does doing down during each either even ever every few for from further
had has have having he her here hers herself him himself his how however i
if in into is it its itself just may maybe me might more most must my myself
neither no nor not now of off on once only or other our ours ourselves out
over own perhaps probably same she should since so some such than that the
their theirs them themselves then there these they this those though through
to too under until up upon very was we were what when where whether which
while who whom whose why will with without would yes yet you your yours
yourself yourselves
""".split())


def normalize_ws(text: str) -> str:
    return re.sub(r"\s+", " ", text).strip()


def tokens(text: str) -> list[str]:
    return WORD_RE.findall(text)


def content_tokens(text: str) -> set[str]:
    """Lowercased tokens minus stopwords and single letters."""
    out = set()
    for tok in tokens(text):
        low = tok.lower()
        if low in STOPWORDS or len(low) < 2:
            continue
        out.add(low)
    return out


def overlap_ratio(source: str, target: str) -> float:
    """Fraction of the source's content tokens that appear in the target."""
    src = content_tokens(source)
    if not src:
        return 0.0
    tgt = content_tokens(target)
    return len(src & tgt) / len(src)


def split_sentences(text: str) -> list[str]:
    parts = SENTENCE_SPLIT_RE.split(text.strip())
    return [p.strip() for p in parts if p.strip()]


def clause_split(question: str) -> list[str]:
    """Split a question into clause-level fragments that carry content."""
    stripped = question.strip().rstrip("?!. ")
    fragments = [normalize_ws(f) for f in CLAUSE_SPLIT_RE.split(stripped)]
    out = [f for f in fragments if f and content_tokens(f)]
    return out or ([normalize_ws(stripped)] if normalize_ws(stripped) else [])


def _is_capitalized(token: str) -> bool:
    return token[0].isalpha() and token[0].isupper()


def entity_spans(text: str) -> list[str]:
    """Maximal runs of capitalized tokens, dropped when purely function words."""
    toks = tokens(text)
    spans: list[str] = []
    run: list[str] = []
    for tok in toks + [""]:
        if tok and _is_capitalized(tok):
            run.append(tok)
            continue
        if run:
            if any(t.lower() not in STOPWORDS for t in run):
                spans.append(" ".join(run))
            run = []
    return spans


def years(text: str) -> list[str]:
    return YEAR_RE.findall(text)


def _anchor_found(anchor: str, chunks_norm: list[str]) -> bool:
    pattern = re.compile(rf"(?<![A-Za-z0-9']){re.escape(anchor)}(?![A-Za-z0-9'])")
    return any(pattern.search(chunk) for chunk in chunks_norm)


def split_claims(answer: str) -> list[str]:
    """Candidate factual claims: answer sentences with at least two word tokens."""
    return [s for s in split_sentences(answer) if len(tokens(s)) >= 2]


def _snippet(text: str, limit: int = 200) -> str:
    text = normalize_ws(text)
    return text if len(text) <= limit else text[: limit - 3] + "..."


def analyze_claims(answer: str, contexts: list[str]) -> list[dict]:
    """Label each claim by exact-match verification of its entity/year anchors."""
    chunks_norm = [normalize_ws(c) for c in contexts]
    claims = []
    for claim in split_claims(answer):
        spans = entity_spans(claim)
        yrs = years(claim)
        anchors = [("entity", s) for s in spans] + [("year", y) for y in yrs]
        matched = [(kind, a) for kind, a in anchors if _anchor_found(a, chunks_norm)]
        missing = [(kind, a) for kind, a in anchors if not _anchor_found(a, chunks_norm)]
        if not anchors:
            claims.append({
                "text": claim,
                "label": "fully_hallucinated",
                "evidence": None,
                "violation": "unsupported: no context-verifiable entities or dates in the claim",
            })
            continue
        if not missing:
            best = max(
                range(len(chunks_norm)),
                key=lambda i: sum(1 for _, a in matched if _anchor_found(a, [chunks_norm[i]])),
            )
            claims.append({
                "text": claim,
                "label": "supported",
                "evidence": _snippet(contexts[best]),
                "violation": None,
            })
            continue
        missing_years = [a for kind, a in missing if kind == "year"]
        missing_entities = [a for kind, a in missing if kind == "entity"]
        if missing_years:
            reason = "temporal mismatch: " + ", ".join(missing_years) + " not found in any context chunk"
        else:
            reason = (
                "entity mismatch: "
                + ", ".join(repr(e) for e in missing_entities)
                + " not found in any context chunk"
            )
        label = "partially_hallucinated" if matched else "fully_hallucinated"
        claims.append({"text": claim, "label": label, "evidence": None, "violation": reason})
    return claims


def chunk_relevance(question: str, chunk: str) -> dict:
    """Banded token-overlap relevance for one chunk."""
    src = content_tokens(question)
    inter = src & content_tokens(chunk)
    ratio = len(inter) / len(src) if src else 0.0
    if ratio >= 0.75:
        score, band = 0.95, "directly answers"
    elif ratio >= 0.5:
        score, band = 0.75, "highly useful"
    elif ratio >= 0.2:
        score, band = 0.45, "weak background"
    else:
        score, band = 0.05, "irrelevant"
    rationale = f"{len(inter)} of {len(src)} question terms appear in this chunk ({band})"
    return {"score": score, "rationale": rationale}


def build_chunk_scores(question: str, contexts: list[str]) -> dict:
    chunks = []
    for i, chunk in enumerate(contexts):
        scored = chunk_relevance(question, chunk)
        chunks.append({"index": i, "score": scored["score"], "rationale": scored["rationale"]})
    return {"chunks": chunks}


def build_aspects(question: str) -> dict:
    return {"aspects": clause_split(question)[:10]}


def build_coverage(aspects: list[str], contexts: list[str]) -> dict:
    verdicts = []
    for aid, aspect in enumerate(aspects):
        best_idx, best_ratio = None, 0.0
        for i, chunk in enumerate(contexts):
            ratio = overlap_ratio(aspect, chunk)
            if ratio > best_ratio:
                best_idx, best_ratio = i, ratio
        if best_idx is not None and best_ratio >= 0.5:
            verdicts.append({
                "aspect_id": aid,
                "covered": True,
                "evidence": _snippet(contexts[best_idx], 160),
                "source": best_idx,
            })
        else:
            verdicts.append({"aspect_id": aid, "covered": False, "evidence": None, "source": None})
    return {"verdicts": verdicts}


def build_completeness(aspects: list[str], answer: str) -> dict:
    sentences = split_sentences(answer) or [answer]
    verdicts = []
    for aid, aspect in enumerate(aspects):
        ratio = overlap_ratio(aspect, answer)
        if ratio >= 0.5:
            best = max(sentences, key=lambda s: overlap_ratio(aspect, s))
            verdicts.append({
                "aspect_id": aid,
                "covered": True,
                "evidence": None,
                "source": _snippet(best, 160),
            })
        else:
            verdicts.append({"aspect_id": aid, "covered": False, "evidence": None, "source": None})
    return {"verdicts": verdicts}


HEDGING_MARKERS = ("hard to say", "not entirely clear", "probably", "maybe", "perhaps", "unclear")


def build_clarity(answer: str) -> dict:
    score = 0.9
    notes = []
    suggestions = []
    sentences = split_sentences(answer)
    if any(len(tokens(s)) > 30 for s in sentences):
        score -= 0.1
        notes.append("contains overlong sentences")
        suggestions.append("split sentences longer than 30 words")
    low = answer.lower()
    if any(marker in low for marker in HEDGING_MARKERS):
        score -= 0.2
        notes.append("hedging language weakens the message")
        suggestions.append("replace hedging phrases with a direct statement")
    if answer.strip() and answer.strip()[-1] not in ".!?":
        score -= 0.05
        notes.append("missing terminal punctuation")
        suggestions.append("end the answer with terminal punctuation")
    explanation = "readable and direct" if not notes else "; ".join(notes)
    return {
        "score": round(max(0.0, min(1.0, score)), 2),
        "explanation": explanation,
        "suggestions": suggestions,
    }


def build_answer_relevance(question: str, answer: str) -> dict:
    src = content_tokens(question)
    covered = src & content_tokens(answer)
    ratio = len(covered) / len(src) if src else 0.0
    score = round(min(1.0, ratio), 2)
    missing = sorted(src - covered)[:8]
    off_topic: list[str] = []
    if ratio < 0.15:
        sentences = split_sentences(answer)
        if sentences:
            off_topic = [_snippet(sentences[0], 120)]
    if score == 1.0:
        missing, off_topic = [], []
    explanation = f"answer covers {len(covered)} of {len(src)} question terms"
    return {
        "score": score,
        "explanation": explanation,
        "missing_parts": missing,
        "off_topic_parts": off_topic,
    }
