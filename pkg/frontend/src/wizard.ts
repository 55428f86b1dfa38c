/** State machine behind the completeness and adherence repair wizards.
 *
 * One wizard shows the groups of one issue class, flattened to per-cell
 * rows, paginated 25 to a page and filterable by field name.  Edits
 * accumulate locally -- per-row values and per-group batch values -- and
 * turn into repair actions only when the user confirms, so the service
 * call stays atomic.
 */

import type { Group, GroupKey, IssueClass, RepairAction, Suggestion } from "./types.js";
import { kindClass } from "./types.js";

export const PAGE_SIZE = 25;

export interface WizardRow {
  key: GroupKey;
  row: number;
  column: string;
  kind: string;
  observed: string;
  suggestions: Suggestion[];
}

export interface Conflict {
  row: number;
  column: string;
  rowValue: string;
  batchValue: string;
}

export function groupKeyOf(group: Group): GroupKey {
  return { column: group.column, kind: group.kind, observed: group.observed };
}

function keyString(key: GroupKey): string {
  return JSON.stringify([key.column, key.kind, key.observed]);
}

function cellString(row: number, column: string): string {
  return JSON.stringify([row, column]);
}

export class WizardState {
  private readonly allRows: WizardRow[];
  private filterColumn: string | null = null;
  private pageIndex = 0;
  private rowEdits = new Map<string, { row: number; column: string; value: string }>();
  private batchEdits = new Map<string, { key: GroupKey; value: string }>();

  constructor(groups: Group[], readonly issueClass: IssueClass) {
    this.allRows = groups
      .filter((group) => kindClass(group.kind) === issueClass)
      .flatMap((group) =>
        group.rows.map((row) => ({
          key: groupKeyOf(group),
          row,
          column: group.column,
          kind: group.kind,
          observed: group.observed,
          suggestions: group.suggestions ?? [],
        })),
      );
  }

  get empty(): boolean {
    return this.allRows.length === 0;
  }

  fieldNames(): string[] {
    return [...new Set(this.allRows.map((row) => row.column))];
  }

  setFilter(column: string | null): void {
    this.filterColumn = column;
    this.pageIndex = 0;
  }

  get filter(): string | null {
    return this.filterColumn;
  }

  filteredRows(): WizardRow[] {
    if (this.filterColumn === null) return this.allRows;
    return this.allRows.filter((row) => row.column === this.filterColumn);
  }

  pageCount(): number {
    return Math.max(1, Math.ceil(this.filteredRows().length / PAGE_SIZE));
  }

  get currentPage(): number {
    return this.pageIndex;
  }

  goToPage(index: number): void {
    this.pageIndex = Math.min(Math.max(index, 0), this.pageCount() - 1);
  }

  nextPage(): void {
    this.goToPage(this.pageIndex + 1);
  }

  previousPage(): void {
    this.goToPage(this.pageIndex - 1);
  }

  pageRows(): WizardRow[] {
    const start = this.pageIndex * PAGE_SIZE;
    return this.filteredRows().slice(start, start + PAGE_SIZE);
  }

  /** The value currently shown in a row's input, edits and batches applied. */
  valueFor(row: WizardRow): string {
    const edit = this.rowEdits.get(cellString(row.row, row.column));
    if (edit !== undefined) return edit.value;
    const batch = this.batchEdits.get(keyString(row.key));
    if (batch !== undefined) return batch.value;
    return "";
  }

  setRowValue(row: WizardRow, value: string): void {
    const key = cellString(row.row, row.column);
    if (value === "") {
      this.rowEdits.delete(key);
    } else {
      this.rowEdits.set(key, { row: row.row, column: row.column, value });
    }
  }

  /** Fig. 4 "accept" control: take the group's top suggestion for one row. */
  acceptTopSuggestion(row: WizardRow): boolean {
    const top = row.suggestions[0];
    if (!top) return false;
    this.setRowValue(row, top.value);
    return true;
  }

  /** Batch repair: one replacement for every cell in the group. */
  setBatchValue(key: GroupKey, value: string): void {
    const encoded = keyString(key);
    if (value === "") {
      this.batchEdits.delete(encoded);
    } else {
      this.batchEdits.set(encoded, { key, value });
    }
  }

  batchValueFor(key: GroupKey): string {
    return this.batchEdits.get(keyString(key))?.value ?? "";
  }

  /** Row edits that disagree with a batch value for the same group. */
  conflicts(): Conflict[] {
    const found: Conflict[] = [];
    for (const row of this.allRows) {
      const batch = this.batchEdits.get(keyString(row.key));
      if (!batch) continue;
      const edit = this.rowEdits.get(cellString(row.row, row.column));
      if (edit && edit.value !== batch.value) {
        found.push({
          row: row.row,
          column: row.column,
          rowValue: edit.value,
          batchValue: batch.value,
        });
      }
    }
    return found;
  }

  get pendingCount(): number {
    const cells = new Set<string>();
    for (const { key, value } of this.batchEdits.values()) {
      const encoded = keyString(key);
      for (const row of this.allRows) {
        if (keyString(row.key) === encoded && value !== "") {
          cells.add(cellString(row.row, row.column));
        }
      }
    }
    for (const edit of this.rowEdits.values()) {
      cells.add(cellString(edit.row, edit.column));
    }
    return cells.size;
  }

  /** Pending edits as repair actions; row edits that merely repeat their
   * group's batch value are dropped. */
  actions(): RepairAction[] {
    const result: RepairAction[] = [];
    for (const { key, value } of this.batchEdits.values()) {
      result.push({ replacement: value, group: key });
    }
    for (const edit of this.rowEdits.values()) {
      const owner = this.allRows.find(
        (row) => row.row === edit.row && row.column === edit.column,
      );
      const batch = owner ? this.batchEdits.get(keyString(owner.key)) : undefined;
      if (batch && batch.value === edit.value) continue;
      result.push({ replacement: edit.value, cell: { row: edit.row, column: edit.column } });
    }
    return result;
  }

  clearEdits(): void {
    this.rowEdits.clear();
    this.batchEdits.clear();
  }
}
