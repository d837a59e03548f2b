"""Judge providers: config validation, retry contract, fixtures, lexical rules."""

from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import clarity_payload, make_item, scripted_judge
from ragvue.judge import (
    HttpJudge,
    JudgeConfig,
    MissingFixture,
    SchemaViolation,
    Timeout,
    Transport,
    complete,
    offline_judge,
)
from ragvue.judge.http import API_KEY_ENV
from ragvue.judge.lexical import analyze_claims, clause_split, entity_spans, years
from ragvue.metrics import clarity_request, decompose_and_verify_prompt


class TestJudgeConfig:
    def test_http_requires_endpoint(self):
        with pytest.raises(ValueError):
            JudgeConfig(provider="http", model="judge-1")

    def test_offline_ignores_endpoint(self):
        cfg = JudgeConfig(provider="offline", model="lexical", endpoint=None)
        assert cfg.endpoint is None

    @pytest.mark.parametrize("temperature", [-0.1, 2.5])
    def test_temperature_range(self, temperature):
        with pytest.raises(ValueError):
            JudgeConfig(temperature=temperature)

    def test_defaults(self):
        cfg = JudgeConfig()
        assert cfg.temperature == 0.0
        assert cfg.max_retries == 2

    def test_snapshot_has_no_credentials(self):
        snap = JudgeConfig(provider="http", endpoint="http://localhost:9/v1").snapshot()
        assert "api_key" not in json.dumps(snap).lower()
        assert "key" not in snap


class TestFixtureJudge:
    def test_fixture_passthrough_attempts_one(self):
        item = make_item(item_id="item-3")
        judge = scripted_judge({
            "strict_faithfulness/item-3": {
                "claims": [{
                    "text": "canned claim",
                    "label": "supported",
                    "evidence": "canned evidence",
                    "violation": None,
                }]
            }
        })
        response = complete(judge, decompose_and_verify_prompt(item))
        assert response.attempts == 1
        assert response.parsed["claims"][0]["text"] == "canned claim"

    def test_missing_fixture_key(self):
        judge = scripted_judge({})
        with pytest.raises(MissingFixture):
            complete(judge, clarity_request(make_item(item_id="item-9")))

    def test_out_of_range_score_rejected_not_clamped(self):
        judge = scripted_judge({"clarity/item-0": clarity_payload(1.02)})
        with pytest.raises(SchemaViolation):
            complete(judge, clarity_request(make_item()))

    def test_offline_judge_is_pure(self):
        payloads = {"clarity/item-0": clarity_payload(0.7)}
        request = clarity_request(make_item())
        first = offline_judge("fixture", fixture=payloads).complete(request)
        second = offline_judge("fixture", fixture=payloads).complete(request)
        assert first.parsed == second.parsed
        assert first.attempts == second.attempts == 1

    def test_fixture_mode_requires_fixture(self):
        with pytest.raises(ValueError):
            offline_judge("fixture")


def _http_config(**kw) -> JudgeConfig:
    kw.setdefault("provider", "http")
    kw.setdefault("model", "remote-judge")
    kw.setdefault("endpoint", "http://judge.test/v1/chat/completions")
    return JudgeConfig(**kw)


def _chat_body(content: str) -> str:
    return json.dumps({"choices": [{"message": {"role": "assistant", "content": content}}]})


class TestHttpJudge:
    def test_malformed_then_valid_gives_attempts_two(self):
        replies = iter([
            (200, _chat_body("not json at all")),
            (200, _chat_body(json.dumps(clarity_payload(0.8)))),
        ])
        judge = HttpJudge(_http_config(), transport=lambda *a: next(replies))
        response = judge.complete(clarity_request(make_item()))
        assert response.attempts == 2
        assert response.parsed["score"] == 0.8

    def test_retry_feedback_appended_to_instruction(self):
        seen = []

        def transport(url, payload, headers, timeout):
            seen.append(payload["messages"][0]["content"])
            if len(seen) == 1:
                return 200, _chat_body(json.dumps({"score": 3.0, "explanation": "x"}))
            return 200, _chat_body(json.dumps(clarity_payload(0.5)))

        judge = HttpJudge(_http_config(), transport=transport)
        judge.complete(clarity_request(make_item()))
        assert "rejected" in seen[1]
        assert "outside [0, 1]" in seen[1]

    def test_schema_violation_after_exhaustion(self):
        judge = HttpJudge(
            _http_config(max_retries=2),
            transport=lambda *a: (200, _chat_body("still not json")),
        )
        with pytest.raises(SchemaViolation):
            judge.complete(clarity_request(make_item()))

    def test_transport_error_after_exhaustion(self):
        calls = []

        def transport(url, payload, headers, timeout):
            calls.append(1)
            return 503, "unavailable"

        judge = HttpJudge(_http_config(max_retries=1), transport=transport)
        with pytest.raises(Transport) as exc:
            judge.complete(clarity_request(make_item()))
        assert exc.value.status == 503
        assert len(calls) == 2

    def test_timeout_surfaces(self):
        import requests

        def transport(url, payload, headers, timeout):
            raise requests.Timeout()

        judge = HttpJudge(_http_config(max_retries=0), transport=transport)
        with pytest.raises(Timeout):
            judge.complete(clarity_request(make_item()))

    def test_bearer_token_from_env(self, monkeypatch):
        monkeypatch.setenv(API_KEY_ENV, "secret-token")
        captured = {}

        def transport(url, payload, headers, timeout):
            captured.update(headers)
            return 200, _chat_body(json.dumps(clarity_payload(0.5)))

        HttpJudge(_http_config(), transport=transport).complete(clarity_request(make_item()))
        assert captured["Authorization"] == "Bearer secret-token"

    def test_wire_format_carries_model_temperature_messages(self):
        captured = {}

        def transport(url, payload, headers, timeout):
            captured["url"] = url
            captured["payload"] = payload
            return 200, _chat_body(json.dumps(clarity_payload(0.5)))

        HttpJudge(_http_config(temperature=0.3), transport=transport).complete(
            clarity_request(make_item())
        )
        assert captured["url"] == "http://judge.test/v1/chat/completions"
        assert captured["payload"]["model"] == "remote-judge"
        assert captured["payload"]["temperature"] == 0.3
        assert captured["payload"]["messages"][0]["role"] == "user"


class TestLexicalClaims:
    def test_supported_when_entities_and_year_match(self):
        claims = analyze_claims(
            "Sting founded The Police in 1977.",
            ["Sting founded The Police in 1977 in London."],
        )
        assert len(claims) == 1
        assert claims[0]["label"] == "supported"
        assert claims[0]["evidence"]

    def test_year_mismatch_is_fully_hallucinated(self):
        claims = analyze_claims(
            "The band was founded in 1978.",
            ["The Police were founded in 1977."],
        )
        assert claims[0]["label"] == "fully_hallucinated"
        assert claims[0]["violation"].startswith("temporal mismatch")

    def test_partial_when_some_anchors_match(self):
        claims = analyze_claims(
            "Sting founded The Police in 1978.",
            ["Sting founded The Police in 1977."],
        )
        assert claims[0]["label"] == "partially_hallucinated"
        assert "1978" in claims[0]["violation"]

    def test_anchor_free_claim_is_unsupported(self):
        claims = analyze_claims(
            "It is hard to say... probably true.",
            ["Dogs react to bells quickly."],
        )
        assert claims[0]["label"] == "fully_hallucinated"
        assert claims[0]["violation"].startswith("unsupported")

    def test_entity_match_is_case_sensitive(self):
        claims = analyze_claims(
            "The report names Helsinki as the venue.",
            ["the report names helsinki as the venue."],
        )
        assert claims[0]["label"] == "fully_hallucinated"
        assert claims[0]["violation"].startswith("entity mismatch")

    def test_entity_spans_drop_pure_function_words(self):
        assert entity_spans("Yes, even though there is no strong evidence.") == []
        assert entity_spans("The Police toured with Sting.") == ["The Police", "Sting"]

    def test_years_extraction(self):
        assert years("Between 1977 and 1984, twice.") == ["1977", "1984"]
        assert years("Chunk 42 has 123 and 12345.") == []

    def test_clause_split_examples(self):
        parts = clause_split("Would a dog respond to a bell before a grey seal?")
        assert parts == ["Would a dog respond to a bell", "a grey seal"]
        assert clause_split("What year did the treaty pass?") == ["What year did the treaty pass"]

    @given(
        st.lists(
            st.sampled_from([
                "Sting founded The Police in 1977.",
                "The Police formed in London.",
                "The band broke up in 1984.",
                "It is hard to say... probably true.",
                "Membership peaked in 1980.",
                "Andy Summers joined later.",
            ]),
            min_size=1,
            max_size=5,
        )
    )
    @settings(max_examples=60, deadline=None)
    def test_labels_agree_with_substring_oracle(self, sentences):
        """Brute-force oracle: a claim is supported iff every entity span and
        every 4-digit year occurs verbatim (word-bounded) in some chunk."""
        import re

        contexts = [
            "Sting founded The Police in 1977.",
            "The Police formed in London and broke up in 1984.",
        ]
        answer = " ".join(sentences)
        claims = analyze_claims(answer, contexts)
        normalized = [re.sub(r"\s+", " ", c) for c in contexts]
        for claim in claims:
            anchors = entity_spans(claim["text"]) + years(claim["text"])
            if not anchors:
                expected = "fully_hallucinated"
            else:
                found = [
                    any(
                        re.search(
                            rf"(?<![A-Za-z0-9']){re.escape(a)}(?![A-Za-z0-9'])", chunk
                        )
                        for chunk in normalized
                    )
                    for a in anchors
                ]
                if all(found):
                    expected = "supported"
                elif any(found):
                    expected = "partially_hallucinated"
                else:
                    expected = "fully_hallucinated"
            assert claim["label"] == expected


def test_in_flight_limit_bounds_concurrent_requests():
    import threading
    import time as _time

    from ragvue.judge import set_max_in_flight

    active, peak = [0], [0]
    gate = threading.Lock()

    def transport(url, payload, headers, timeout):
        with gate:
            active[0] += 1
            peak[0] = max(peak[0], active[0])
        _time.sleep(0.01)
        with gate:
            active[0] -= 1
        return 200, _chat_body(json.dumps(clarity_payload(0.5)))

    set_max_in_flight(2)
    try:
        judge = HttpJudge(_http_config(), transport=transport)
        threads = [
            threading.Thread(target=judge.complete, args=(clarity_request(make_item()),))
            for _ in range(6)
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert peak[0] <= 2
    finally:
        set_max_in_flight(8)


class TestTemplates:
    def test_every_template_ends_with_schema_description(self):
        from ragvue.judge.templates import TEMPLATE_FILES, template_text

        for name in TEMPLATE_FILES:
            text = template_text(name)
            assert "Respond with a single JSON object" in text, name

    def test_faithfulness_prompt_contains_rules_and_numbered_chunks(self):
        item = make_item(
            answer="An answer.",
            contexts=("first chunk text", "second chunk text"),
        )
        request = decompose_and_verify_prompt(item)
        text = request.instruction
        assert "minimal factual claims" in text
        assert "exact surface-form match" in text
        assert "Temporal expressions" in text
        assert "[1] first chunk text" in text
        assert "[2] second chunk text" in text
        assert '"claims"' in text

    def test_prompt_hash_stable_across_runs(self):
        import hashlib

        item = make_item()
        first = hashlib.sha256(decompose_and_verify_prompt(item).instruction.encode()).hexdigest()
        second = hashlib.sha256(decompose_and_verify_prompt(item).instruction.encode()).hexdigest()
        assert first == second

    def test_aspects_template_sees_question_only(self):
        from ragvue.aspects import aspects_request

        item = make_item(
            question="Did the treaty pass?",
            answer="SECRET-ANSWER-TEXT",
            contexts=("SECRET-CONTEXT-TEXT",),
        )
        request = aspects_request(item)
        assert "Did the treaty pass?" in request.instruction
        assert "SECRET-ANSWER-TEXT" not in request.instruction
        assert "SECRET-CONTEXT-TEXT" not in request.instruction

    def test_answer_relevance_template_excludes_contexts(self):
        from ragvue.metrics import answer_relevance_request

        item = make_item(contexts=("SECRET-CONTEXT-TEXT",))
        request = answer_relevance_request(item)
        assert "SECRET-CONTEXT-TEXT" not in request.instruction

    def test_template_versions_declared(self):
        from ragvue.judge.templates import TEMPLATE_FILES, template_version

        for name in TEMPLATE_FILES:
            assert template_version(name) == "v1"
