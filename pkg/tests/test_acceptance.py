"""Acceptance suite: one test per release criterion, each printing a pass line.

Run with `pytest tests/test_acceptance.py -v` for the per-criterion report.
"""

from __future__ import annotations

import csv
import json
import random
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import (
    CapturingJudge,
    CountingJudge,
    SHOWCASE_RECORDS,
    aspects_payload,
    chunk_payload,
    claims_payload,
    clarity_payload,
    completeness_payload,
    coverage_payload,
    make_item,
    scripted_judge,
)
from ragvue.aspects import extract_aspects
from ragvue.calibration import agreement_from_scores, calibrate
from ragvue.cli import main
from ragvue.engine import evaluate, run_agentic
from ragvue.judge import offline_judge
from ragvue.metrics import (
    answer_completeness,
    retrieval_coverage,
    retrieval_relevance,
    strict_faithfulness,
)
from ragvue.model import PER_CASE_METRICS, ResultStatus, WeightsConfig, descriptor_for
from ragvue.orchestrator import answer_composite, harmonic_mean, select_for_shape, select_metrics
from ragvue.reports import canonical_json
from ragvue.variants import SourceRecord, build_corpus, build_variants


def _pass(name: str) -> None:
    print(f"ACCEPTANCE PASS: {name}")


def test_relevance_threshold_counting_oracle():
    rng = random.Random(20260810)
    started = time.perf_counter()
    for case in range(50):
        n = rng.randint(1, 12)
        tau = rng.choice([0.2, 0.5, 0.7, 0.9])
        scores = [round(rng.random(), 2) for _ in range(n)]
        if case % 3 == 0:
            scores[rng.randrange(n)] = tau  # force the boundary case
        item = make_item(contexts=tuple(f"chunk {i}" for i in range(n)), item_id="item-0")
        judge = scripted_judge({"retrieval_relevance/item-0": chunk_payload(scores)})
        result = retrieval_relevance(item, judge, tau=tau)
        oracle = sum(1 for s in scores if s >= tau)
        assert result.score == oracle / n  # tolerance 0
        assert abs(result.score * n - oracle) < 1e-12
    # Explicit boundary check: a chunk scored exactly tau counts as relevant.
    judge = scripted_judge({"retrieval_relevance/item-0": chunk_payload([0.7])})
    assert retrieval_relevance(make_item(contexts=("c",)), judge, tau=0.7).score == 1.0
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"relevance threshold suite took {elapsed:.3f}s"
    _pass("Relevance threshold suite (50 randomized cases, counting oracle, boundary inclusive)")


def test_coverage_completeness_ratios_shared_aspects():
    rng = random.Random(42)
    for _ in range(40):
        n = rng.randint(1, 10)
        flags = [rng.random() < 0.5 for _ in range(n)]
        texts = [f"aspect {i}" for i in range(n)]
        item = make_item(item_id="item-0")
        aspect_set = extract_aspects(
            item, scripted_judge({"aspects/item-0": aspects_payload(texts)})
        )
        cov = retrieval_coverage(
            item, aspect_set,
            scripted_judge({"retrieval_coverage/item-0": coverage_payload(flags)}),
        )
        comp = answer_completeness(
            item, aspect_set,
            scripted_judge({"answer_completeness/item-0": completeness_payload(flags)}),
        )
        covered = sum(flags)
        assert cov.score == covered / n
        assert comp.score == covered / n
        assert cov.details["aspect_count"] == comp.details["aspect_count"] == n

    # One extraction call per item even when both aspect metrics run.
    item = make_item(item_id="item-7")
    judge = CountingJudge(scripted_judge({
        "aspects/item-7": aspects_payload(["a", "b"]),
        "retrieval_coverage/item-7": coverage_payload([True, False]),
        "answer_completeness/item-7": completeness_payload([False, True]),
    }))
    report = evaluate([item], ["retrieval_coverage", "answer_completeness"], judge=judge)
    assert judge.calls["aspects"] == 1
    results = {r.metric: r for r in report.cases[0].results}
    assert (
        results["retrieval_coverage"].details["aspect_count"]
        == results["answer_completeness"].details["aspect_count"]
        == 2
    )
    _pass("Coverage/completeness suite (exact ratios, shared |A|, one aspect-extraction call)")


def test_faithfulness_label_enumeration_and_zero_claims():
    labels = ("supported", "partially_hallucinated", "fully_hallucinated")
    checked = 0
    for total in range(1, 7):
        for s in range(total + 1):
            for p in range(total - s + 1):
                f = total - s - p
                multiset = (["supported"] * s
                            + ["partially_hallucinated"] * p
                            + ["fully_hallucinated"] * f)
                judge = scripted_judge({"strict_faithfulness/item-0": claims_payload(multiset)})
                result = strict_faithfulness(make_item(), judge)
                # Independent counting oracle over the label multiset.
                oracle_supported = sum(1 for l in multiset if l == labels[0])
                assert result.score == oracle_supported / total
                checked += 1
    assert checked == sum((t + 1) * (t + 2) // 2 for t in range(1, 7))
    zero = strict_faithfulness(
        make_item(), scripted_judge({"strict_faithfulness/item-0": claims_payload([])})
    )
    assert zero.status is ResultStatus.NOT_APPLICABLE
    _pass("Faithfulness ratio suite (all label multisets up to 6 claims; zero claims not applicable)")


def test_calibration_agreement_on_random_score_sets():
    rng = random.Random(7)
    for _ in range(100):
        k = rng.randint(1, 6)
        scores = [round(rng.random(), 4) for _ in range(k)]
        judges = [scripted_judge({"clarity/item-0": clarity_payload(s)}) for s in scores]
        result = calibrate(make_item(), "clarity", judges)
        assert abs(result.agreement - (1.0 - (max(scores) - min(scores)))) <= 1e-12
    single = calibrate(make_item(), "clarity", [scripted_judge({"clarity/item-0": clarity_payload(0.37)})])
    assert single.agreement == 1.0
    _pass("Calibration suite (agreement = 1 - range over 100 random score sets; k=1 gives 1.0)")


@given(
    scores=st.lists(st.floats(min_value=0.0, max_value=1.0, allow_nan=False), min_size=1, max_size=6),
    seed=st.integers(min_value=0, max_value=999),
)
@settings(max_examples=80, deadline=None)
def test_calibration_permutation_and_duplicate_invariance(scores, seed):
    shuffled = scores.copy()
    random.Random(seed).shuffle(shuffled)
    assert agreement_from_scores(shuffled) == agreement_from_scores(scores)
    assert agreement_from_scores(scores + [scores[seed % len(scores)]]) == agreement_from_scores(scores)


def test_composites_properties_and_renormalization():
    rng = random.Random(99)
    for _ in range(1000):
        a, b = rng.random(), rng.random()
        hm = harmonic_mean(a, b)
        assert hm == harmonic_mean(b, a)
        assert hm <= (a + b) / 2 + 1e-12
        assert harmonic_mean(a, a) == pytest.approx(a, abs=1e-12)
        assert harmonic_mean(0.0, b) == 0.0
    scores = {
        "strict_faithfulness": 0.0,
        "answer_relevance": 0.40,
        "answer_completeness": 0.00,
        "clarity": 0.70,
    }
    weights = WeightsConfig(w_faithfulness=0.4, w_relevance=0.2, w_completeness=0.2, w_clarity=0.2)
    assert answer_composite(scores, weights) == pytest.approx(0.22, abs=1e-9)
    del scores["strict_faithfulness"]
    renorm = answer_composite({k: 0.5 for k in scores}, weights)
    assert renorm == pytest.approx(0.5, abs=1e-9)
    _pass("Composites (harmonic-mean properties over 1000 pairs; 0.22 blend check)")


# Hand-annotated claim decompositions for the three replayed model answers.
SHOWCASE_REPLAY = [
    ("genghis-khan-descendants", "hallucinated", [
        ("No, even though there is no strong supporting evidence for this conclusion.",
         "fully_hallucinated"),
    ]),
    ("the-police-arrests", "hallucinated", [
        ("Yes, even though there is no strong supporting evidence for this conclusion.",
         "fully_hallucinated"),
    ]),
    ("dog-seal-bell", "unclear", [
        ("It is hard to say... probably true.", "fully_hallucinated"),
        ("The evidence is not entirely clear.", "fully_hallucinated"),
    ]),
]


def test_showcase_replay_with_lexical_judge():
    records = {r.qid: r for r in SHOWCASE_RECORDS}
    judge = offline_judge("lexical")
    for qid, kind, expected_claims in SHOWCASE_REPLAY:
        variants = {i.metadata["kind"]: i for i in build_variants(records[qid])}
        item = variants[kind]

        faith = strict_faithfulness(item, judge)
        assert faith.status is ResultStatus.OK, faith.explanation
        assert faith.score == 0.0, (qid, faith.details)
        got = [(c["text"], c["label"]) for c in faith.details["claims"]]
        assert got == expected_claims, (qid, got)

        aspect_set = extract_aspects(item, judge)
        comp = answer_completeness(item, aspect_set, judge)
        assert comp.status is ResultStatus.OK
        assert comp.score == 0.0, (qid, comp.details)
    _pass("Showcase replay (strict_faithfulness 0.0 and completeness 0.00 on all three cases)")


def _twenty_records() -> list[SourceRecord]:
    records = list(SHOWCASE_RECORDS)
    for i in range(17):
        records.append(
            SourceRecord(
                qid=f"synthetic-{i}",
                question=f"Did the Northwind expedition number {i} depart before {1900 + i}?",
                reference_label="yes" if i % 2 == 0 else "no",
                facts=(
                    f"The Northwind expedition number {i} departed from Tromso in {1899 + i}.",
                    f"Harbor records list {1899 + i} as the year expedition number {i} left port.",
                ),
                decomposition=(f"When did expedition {i} depart?",),
                evidence_titles=(f"Northwind {i}",),
            )
        )
    return records


def test_corpus_determinism_and_fixture_replay():
    started = time.perf_counter()
    items = build_corpus(_twenty_records())
    assert len(items) == 100

    capture = CapturingJudge(offline_judge("lexical"))
    run_agentic(items, judge=capture)
    fixture = capture.captured

    replay_a = run_agentic(items, judge=offline_judge("fixture", fixture=fixture))
    replay_b = run_agentic(items, judge=offline_judge("fixture", fixture=fixture))
    bytes_a = canonical_json(replay_a, volatile=False)
    bytes_b = canonical_json(replay_b, volatile=False)
    assert bytes_a == bytes_b
    assert len(replay_a.cases) == 100
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0, f"corpus determinism suite took {elapsed:.2f}s"
    _pass("Corpus determinism (100 items; byte-identical fixture replays; under 10 s)")


def test_selection_contract_exhaustive():
    item_full = make_item()
    assert len(select_metrics(item_full).selected) == 6
    sel_qc = select_metrics(make_item(answer=None))
    assert set(sel_qc.selected) == {"retrieval_relevance", "retrieval_coverage"}
    sel_qa = select_metrics(make_item(contexts=()))
    assert set(sel_qa.selected) == {"clarity", "answer_relevance", "answer_completeness"}
    assert dict(sel_qa.skipped)["strict_faithfulness"] == "no contexts"

    for has_q in (False, True):
        for has_a in (False, True):
            for has_c in (False, True):
                present = {
                    name
                    for name, flag in (("question", has_q), ("answer", has_a), ("contexts", has_c))
                    if flag
                }
                selection = select_for_shape(has_q, has_a, has_c)
                expected = tuple(
                    m for m in PER_CASE_METRICS if descriptor_for(m).required <= present
                )
                assert selection.selected == expected
                assert {m for m, _ in selection.skipped} == set(PER_CASE_METRICS) - set(expected)
                assert all(reason for _, reason in selection.skipped)
    _pass("Selection contract (6/2/3 with reasons; exhaustive over 8 presence shapes)")


def test_cli_contract(tmp_path, capsys):
    # list-metrics prints exactly seven entries.
    assert main(["list-metrics"]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 7

    data = tmp_path / "data.jsonl"
    data.write_text(
        "\n".join(
            json.dumps({
                "question": f"Did event {i} happen in {1950 + i}?",
                "answer": f"Event {i} happened in {1950 + i}.",
                "context": [f"Event {i} happened in {1950 + i}."],
            })
            for i in range(3)
        ) + "\n",
        encoding="utf-8",
    )

    # Exit 0 and all three formats written; csv rows equal cases x metrics.
    code = main([
        "eval", "--inputs", str(data), "--metrics", "clarity,answer_relevance",
        "--out-base", str(tmp_path / "r"), "--format", "json,md,csv",
    ])
    assert code == 0
    for ext in ("json", "md", "csv"):
        assert (tmp_path / f"r.{ext}").exists()
    rows = list(csv.reader((tmp_path / "r.csv").read_text(encoding="utf-8").splitlines()))
    report = json.loads((tmp_path / "r.json").read_text(encoding="utf-8"))
    expected_rows = sum(len(case["results"]) for case in report["cases"])
    assert len(rows) - 1 == expected_rows == 6

    # Agentic csv rows equal the per-case selected-metric counts.
    code = main([
        "agentic", "--inputs", str(data), "--out-base", str(tmp_path / "a"), "--format", "json,csv",
    ])
    assert code == 0
    agentic_report = json.loads((tmp_path / "a.json").read_text(encoding="utf-8"))
    agentic_rows = list(csv.reader((tmp_path / "a.csv").read_text(encoding="utf-8").splitlines()))
    assert len(agentic_rows) - 1 == sum(
        len(case["selection"]["selected"]) for case in agentic_report["cases"]
    )

    # Exit 2: unknown metric, with the valid names on stderr.
    capsys.readouterr()
    assert main([
        "eval", "--inputs", str(data), "--metrics", "bogus", "--out-base", str(tmp_path / "x"),
    ]) == 2
    err = capsys.readouterr().err
    assert "strict_faithfulness" in err

    # Exit 1: one case's judge payload missing -> case-level error, report still written.
    fixture_path = tmp_path / "fixture.json"
    fixture_path.write_text(json.dumps({"clarity/item-0": clarity_payload(0.9)}), encoding="utf-8")
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps({
        "judge": {"provider": "offline", "model": "fixture"},
        "judge_fixture": str(fixture_path),
    }), encoding="utf-8")
    assert main([
        "eval", "--inputs", str(data), "--metrics", "clarity",
        "--out-base", str(tmp_path / "partial"), "--config", str(config_path),
    ]) == 1
    assert (tmp_path / "partial.json").exists()
    _pass("CLI contract (7 metric lines; exit codes 0/1/2; csv rows match selections)")
