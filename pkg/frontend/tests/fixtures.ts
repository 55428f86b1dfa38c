/** Canonical report/group payloads used across the unit tests. */

import type { Group, Report } from "../src/types.js";

export const FIVE_ISSUE_REPORT: Report = {
  template_id: "tmpl-sample-v1",
  row_count: 5,
  generated_at: "2026-01-01T00:00:00Z",
  summary: {
    error_count: 5,
    warning_count: 0,
    completeness: 2,
    adherence: 3,
    by_kind: { missing_required: 2, not_in_value_set: 3 },
    by_column: { donor_id: 2, time_unit: 3 },
  },
  issues: [
    { kind: "missing_required", severity: "error", column: "donor_id", row: 2, observed: null, expected: "a non-empty value" },
    { kind: "not_in_value_set", severity: "error", column: "time_unit", row: 1, observed: "days", expected: "one of: Year, Month, Day" },
    { kind: "not_in_value_set", severity: "error", column: "time_unit", row: 3, observed: "days", expected: "one of: Year, Month, Day" },
    { kind: "missing_required", severity: "error", column: "donor_id", row: 4, observed: null, expected: "a non-empty value" },
    { kind: "not_in_value_set", severity: "error", column: "time_unit", row: 5, observed: "days", expected: "one of: Year, Month, Day" },
  ],
  groups: [
    { column: "donor_id", kind: "missing_required", observed: "", rows: [2, 4], suggestions: null },
    { column: "time_unit", kind: "not_in_value_set", observed: "days", rows: [1, 3, 5], suggestions: null },
  ],
};

export const SUGGESTED_GROUPS: Group[] = [
  { column: "donor_id", kind: "missing_required", observed: "", rows: [2, 4], suggestions: [] },
  {
    column: "time_unit",
    kind: "not_in_value_set",
    observed: "days",
    rows: [1, 3, 5],
    suggestions: [{ value: "Day", score: 0.75, provenance: "edit_distance" }],
  },
];

/** One adherence group with `count` member rows, for pagination tests. */
export function wideGroup(count: number, column = "unit"): Group {
  return {
    column,
    kind: "not_in_value_set",
    observed: "bogus",
    rows: Array.from({ length: count }, (_, i) => i + 1),
    suggestions: [{ value: "Fixed", score: 0.8, provenance: "edit_distance" }],
  };
}
