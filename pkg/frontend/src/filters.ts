/** Client-side case filtering; the report data itself is never recomputed. */

import type { CaseReportData } from "./types.js";

export interface CaseFilters {
	/** Match metadata "kind" exactly; empty string disables the filter. */
	kind: string;
	/** Metric whose score the threshold applies to; empty string disables. */
	metric: string;
	threshold: number | null;
	direction: "below" | "at_or_above";
}

export const EMPTY_FILTERS: CaseFilters = {
	kind: "",
	metric: "",
	threshold: null,
	direction: "below",
};

export function caseScore(caseReport: CaseReportData, metric: string): number | null {
	const result = caseReport.results.find((r) => r.metric === metric);
	return result && result.status === "ok" ? result.score : null;
}

export function filterCases(cases: CaseReportData[], filters: CaseFilters): CaseReportData[] {
	return cases.filter((c) => {
		if (filters.kind && (c.metadata?.kind ?? "") !== filters.kind) {
			return false;
		}
		if (filters.metric && filters.threshold !== null) {
			const score = caseScore(c, filters.metric);
			if (score === null) {
				return false;
			}
			if (filters.direction === "below" ? score >= filters.threshold : score < filters.threshold) {
				return false;
			}
		}
		return true;
	});
}

export function distinctKinds(cases: CaseReportData[]): string[] {
	const kinds = new Set<string>();
	for (const c of cases) {
		const kind = c.metadata?.kind;
		if (kind) kinds.add(kind);
	}
	return [...kinds].sort();
}
