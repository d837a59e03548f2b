import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { EMPTY_FILTERS, caseScore, distinctKinds, filterCases } from "../src/filters";
import type { RunReportData } from "../src/types";

const report = JSON.parse(
	readFileSync(join(__dirname, "fixtures", "report.json"), "utf-8"),
) as RunReportData;

describe("filterCases", () => {
	it("empty filters return the full case list", () => {
		expect(filterCases(report.cases, EMPTY_FILTERS)).toHaveLength(report.cases.length);
	});

	it("score-threshold filter keeps only failing cases", () => {
		const failing = filterCases(report.cases, {
			...EMPTY_FILTERS,
			metric: "strict_faithfulness",
			threshold: 0.5,
			direction: "below",
		});
		expect(failing.length).toBeGreaterThan(0);
		for (const c of failing) {
			const score = caseScore(c, "strict_faithfulness");
			expect(score).not.toBeNull();
			expect(score!).toBeLessThan(0.5);
		}
		// And the complement direction keeps the rest of the scored cases.
		const passing = filterCases(report.cases, {
			...EMPTY_FILTERS,
			metric: "strict_faithfulness",
			threshold: 0.5,
			direction: "at_or_above",
		});
		const scored = report.cases.filter((c) => caseScore(c, "strict_faithfulness") !== null);
		expect(failing.length + passing.length).toBe(scored.length);
	});

	it("kind filter matches metadata exactly", () => {
		const hallucinated = filterCases(report.cases, { ...EMPTY_FILTERS, kind: "hallucinated" });
		expect(hallucinated).toHaveLength(1);
		expect(hallucinated[0].metadata.kind).toBe("hallucinated");
	});

	it("filters compose", () => {
		const both = filterCases(report.cases, {
			kind: "ideal",
			metric: "strict_faithfulness",
			threshold: 0.5,
			direction: "below",
		});
		for (const c of both) {
			expect(c.metadata.kind).toBe("ideal");
		}
	});

	it("cases without the scored metric are excluded by a score filter", () => {
		const filtered = filterCases(report.cases, {
			...EMPTY_FILTERS,
			metric: "nonexistent_metric",
			threshold: 0.5,
			direction: "below",
		});
		expect(filtered).toHaveLength(0);
	});

	it("clearing filters restores the full list", () => {
		const narrowed = filterCases(report.cases, { ...EMPTY_FILTERS, kind: "hallucinated" });
		expect(narrowed.length).toBeLessThan(report.cases.length);
		expect(filterCases(report.cases, EMPTY_FILTERS)).toHaveLength(report.cases.length);
	});
});

describe("distinctKinds", () => {
	it("collects the sorted kind vocabulary", () => {
		expect(distinctKinds(report.cases)).toEqual([
			"hallucinated",
			"ideal",
			"off_topic",
			"partial",
			"unclear",
		]);
	});
});

describe("caseScore", () => {
	it("returns null for not-applicable results", () => {
		const caseReport = report.cases[0];
		expect(caseScore(caseReport, "not_a_metric")).toBeNull();
	});
});
