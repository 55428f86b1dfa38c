/** Shapes of the REST service's JSON bodies (the report is the contract). */

export type Severity = "error" | "warning";

export type IssueKind =
  | "missing_required"
  | "missing_column"
  | "not_in_value_set"
  | "type_mismatch"
  | "out_of_range"
  | "pattern_mismatch"
  | "provenance_mismatch"
  | "unknown_column";

export type IssueClass = "completeness" | "adherence" | "warning";

const COMPLETENESS: ReadonlySet<IssueKind> = new Set(["missing_required", "missing_column"]);
const WARNING: ReadonlySet<IssueKind> = new Set(["unknown_column"]);

export function kindClass(kind: IssueKind): IssueClass {
  if (COMPLETENESS.has(kind)) return "completeness";
  if (WARNING.has(kind)) return "warning";
  return "adherence";
}

export interface Suggestion {
  value: string;
  score: number;
  provenance: string;
}

export interface Issue {
  kind: IssueKind;
  severity: Severity;
  column: string;
  row: number | null;
  observed: string | null;
  expected: string;
}

export interface Group {
  column: string;
  kind: IssueKind;
  observed: string;
  rows: number[];
  suggestions: Suggestion[] | null;
}

export interface Summary {
  error_count: number;
  warning_count: number;
  completeness: number;
  adherence: number;
  by_kind: Record<string, number>;
  by_column: Record<string, number>;
}

export interface Report {
  template_id: string;
  row_count: number;
  generated_at: string;
  summary: Summary;
  issues: Issue[];
  groups: Group[];
}

export interface GroupKey {
  column: string;
  kind: string;
  observed: string;
}

export type RepairAction =
  | { replacement: string; group: GroupKey }
  | { replacement: string; cell: { row: number; column: string } };

export interface SuggestResponse {
  session_id: string;
  template_id: string;
  groups: Group[];
}

export interface RepairResponse {
  session_id: string;
  filename: string;
  format: string;
  file_base64: string;
  report: Report;
}

export interface TemplateField {
  name: string;
  datatype: string;
  required?: boolean;
  value_set?: { kind: string; labels?: string[]; source_id?: string; branch_id?: string };
}

export interface TemplateDoc {
  id: string;
  name: string;
  version: string;
  fields: TemplateField[];
}
