/** Derivations for the summary dashboard: error tiles and the per-column bar graph.
 *
 * Every number comes straight out of the report summary; nothing is
 * recounted client-side.
 */

import type { Issue, Report } from "./types.js";

export interface BarDatum {
  column: string;
  count: number;
  /** count / max(count), for bar widths; 0 when there are no errors. */
  fraction: number;
}

export interface DashboardModel {
  completeness: number;
  adherence: number;
  errorCount: number;
  warningCount: number;
  clean: boolean;
  bars: BarDatum[];
  warnings: Issue[];
}

export function barData(byColumn: Record<string, number>): BarDatum[] {
  const entries = Object.entries(byColumn);
  const max = entries.reduce((acc, [, count]) => Math.max(acc, count), 0);
  return entries.map(([column, count]) => ({
    column,
    count,
    fraction: max === 0 ? 0 : count / max,
  }));
}

export function dashboardModel(report: Report): DashboardModel {
  const summary = report.summary;
  return {
    completeness: summary.completeness,
    adherence: summary.adherence,
    errorCount: summary.error_count,
    warningCount: summary.warning_count,
    clean: summary.error_count === 0,
    bars: barData(summary.by_column),
    warnings: report.issues.filter((issue) => issue.severity === "warning"),
  };
}
