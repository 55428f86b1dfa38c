/** View wiring: upload -> dashboard -> repair wizards -> download.
 *
 * All counts render straight from the latest service report; edits live in
 * WizardState until the user confirms, then one /repair call applies them.
 */

import { ApiClient, ApiError } from "./api.js";
import { dashboardModel } from "./dashboard.js";
import { decodeBase64, downloadName, mediaTypeFor } from "./download.js";
import type { Group, IssueClass, Report, TemplateDoc } from "./types.js";
import { UploadState, wireDropZone } from "./upload.js";
import { WizardState } from "./wizard.js";

interface AppState {
  api: ApiClient;
  upload: UploadState;
  sessionId: string | null;
  filename: string;
  report: Report | null;
  groups: Group[];
  template: TemplateDoc | null;
  repairedFile: { bytes: Uint8Array; name: string; mediaType: string } | null;
  originalBytes: Uint8Array | null;
  wizard: WizardState | null;
  wizardClass: IssueClass | null;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}

function show(sectionId: string): void {
  for (const section of document.querySelectorAll<HTMLElement>("main > section")) {
    section.hidden = section.id !== sectionId;
  }
}

function flash(message: string, kind: "error" | "info" = "error"): void {
  const box = document.getElementById("messages")!;
  box.textContent = message;
  box.className = message ? `message ${kind}` : "";
}

function dropdownLabels(state: AppState, column: string): string[] | null {
  const field = state.template?.fields.find((f) => f.name === column);
  const labels = field?.value_set?.labels;
  return labels && labels.length > 0 ? labels : null;
}

// ---------------------------------------------------------------------------
// dashboard

function renderDashboard(state: AppState): void {
  const report = state.report!;
  const model = dashboardModel(report);
  const root = document.getElementById("dashboard-body")!;
  root.replaceChildren();

  const tiles = el("div", { class: "tiles" });
  const tile = (label: string, count: number, issueClass: IssueClass) => {
    const button = el(
      "button",
      { class: `tile ${issueClass}` },
      el("span", { class: "count" }, String(count)),
      el("span", {}, `${label} errors`),
    );
    button.disabled = count === 0;
    button.addEventListener("click", () => openWizard(state, issueClass));
    return button;
  };
  tiles.append(
    tile("completeness", model.completeness, "completeness"),
    tile("adherence", model.adherence, "adherence"),
  );
  root.append(tiles);

  if (model.clean) {
    root.append(el("p", { class: "success" },
      "No errors detected. The spreadsheet conforms to its template."));
  }

  const bars = el("div", { class: "bars" });
  for (const bar of model.bars) {
    bars.append(
      el("div", { class: "bar-row" },
        el("span", { class: "bar-label" }, bar.column),
        el("div", { class: "bar-track" },
          el("div", {
            class: "bar-fill",
            style: `width: ${Math.round(bar.fraction * 100)}%`,
          })),
        el("span", { class: "bar-count" }, String(bar.count)),
      ),
    );
  }
  root.append(el("h3", {}, "Errors per column"), bars);

  if (model.warnings.length > 0) {
    const list = el("ul", { class: "warnings" });
    for (const warning of model.warnings) {
      list.append(el("li", {}, `${warning.column}: ${warning.expected}`));
    }
    root.append(el("h3", {}, `Warnings (${model.warningCount})`), list);
  }

  const downloadButton = document.getElementById("to-download") as HTMLButtonElement;
  downloadButton.disabled = !(model.clean || state.repairedFile !== null);
  show("dashboard");
}

// ---------------------------------------------------------------------------
// wizards

async function openWizard(state: AppState, issueClass: IssueClass): Promise<void> {
  try {
    const suggestions = await state.api.suggest(state.sessionId!);
    state.groups = suggestions.groups;
  } catch (error) {
    flash(describe(error));
    return;
  }
  state.wizard = new WizardState(state.groups, issueClass);
  state.wizardClass = issueClass;
  renderWizard(state);
}

function renderWizard(state: AppState): void {
  const wizard = state.wizard!;
  const root = document.getElementById("wizard-body")!;
  const title = document.getElementById("wizard-title")!;
  title.textContent =
    state.wizardClass === "completeness" ? "Repair completeness errors" : "Repair adherence errors";
  root.replaceChildren();

  if (wizard.empty) {
    root.append(el("p", {}, "Nothing left to repair here."));
    show("wizard");
    return;
  }

  // field filter
  const filter = el("select", { class: "field-filter" });
  filter.append(el("option", { value: "" }, "All fields"));
  for (const name of wizard.fieldNames()) {
    const option = el("option", { value: name }, name);
    if (wizard.filter === name) option.setAttribute("selected", "selected");
    filter.append(option);
  }
  filter.addEventListener("change", () => {
    wizard.setFilter(filter.value === "" ? null : filter.value);
    renderWizard(state);
  });
  root.append(el("div", { class: "wizard-controls" }, el("label", {}, "Filter by field: ", filter)));

  // batch repair per group on this page
  const seen = new Set<string>();
  const batchBox = el("div", { class: "batch-box" });
  for (const row of wizard.pageRows()) {
    const keyId = `${row.key.column}|${row.key.kind}|${row.key.observed}`;
    if (seen.has(keyId)) continue;
    seen.add(keyId);
    const input = buildValueInput(state, row.key.column, wizard.batchValueFor(row.key));
    const apply = el("button", {}, "Apply to all rows");
    apply.addEventListener("click", () => {
      wizard.setBatchValue(row.key, inputValue(input));
      renderWizard(state);
    });
    const label = row.observed === ""
      ? `${row.key.column}: missing values`
      : `${row.key.column}: "${row.observed}"`;
    batchBox.append(el("div", { class: "batch-row" }, el("span", {}, label), input, apply));
  }
  root.append(el("h3", {}, "Batch repair"), batchBox);

  // the paginated error table
  const table = el("table", { class: "error-table" });
  table.append(el("tr", {},
    el("th", {}, "New value"),
    el("th", {}, "Row"),
    el("th", {}, "Field"),
    el("th", {}, "Observed"),
    el("th", {}, "Suggestion"),
  ));
  for (const row of wizard.pageRows()) {
    const input = buildValueInput(state, row.column, wizard.valueFor(row));
    inputNode(input).addEventListener("change", () => {
      wizard.setRowValue(row, inputValue(input));
    });
    const accept = el("button", {}, "Accept");
    const top = row.suggestions[0];
    if (top) {
      accept.addEventListener("click", () => {
        wizard.acceptTopSuggestion(row);
        renderWizard(state);
      });
    } else {
      accept.disabled = true;
    }
    table.append(el("tr", { class: "error-row", "data-row": String(row.row), "data-column": row.column },
      el("td", {}, input),
      el("td", {}, String(row.row)),
      el("td", {}, row.column),
      el("td", {}, row.observed === "" ? "(blank)" : row.observed),
      el("td", {}, top ? `${top.value} (${top.score.toFixed(2)})` : "-", " ", accept),
    ));
  }
  root.append(table);

  // pagination, always visible together with the summary link
  const pager = el("div", { class: "pager" });
  const prev = el("button", {}, "Previous");
  const next = el("button", {}, "Next");
  prev.disabled = wizard.currentPage === 0;
  next.disabled = wizard.currentPage >= wizard.pageCount() - 1;
  prev.addEventListener("click", () => { wizard.previousPage(); renderWizard(state); });
  next.addEventListener("click", () => { wizard.nextPage(); renderWizard(state); });
  pager.append(prev,
    el("span", {}, ` page ${wizard.currentPage + 1} of ${wizard.pageCount()} `), next);
  root.append(pager);

  const confirm = el("button", { class: "primary" },
    `Apply ${wizard.pendingCount} pending repair(s)`);
  confirm.disabled = wizard.pendingCount === 0;
  confirm.addEventListener("click", () => confirmRepairs(state));
  root.append(el("div", { class: "wizard-actions" }, confirm));

  show("wizard");
}

function buildValueInput(state: AppState, column: string, current: string): HTMLElement {
  const labels = dropdownLabels(state, column);
  if (labels) {
    const select = el("select", { class: "value-input" });
    select.append(el("option", { value: "" }, "(choose)"));
    for (const label of labels) {
      const option = el("option", { value: label }, label);
      if (label === current) option.setAttribute("selected", "selected");
      select.append(option);
    }
    return select;
  }
  const input = el("input", { class: "value-input", type: "text", value: current });
  return input;
}

function inputValue(node: HTMLElement): string {
  return (node as HTMLInputElement | HTMLSelectElement).value;
}

function inputNode(node: HTMLElement): HTMLElement {
  return node;
}

async function confirmRepairs(state: AppState): Promise<void> {
  const wizard = state.wizard!;
  const conflicts = wizard.conflicts();
  if (conflicts.length > 0) {
    highlightConflicts(conflicts.map((c) => ({ row: c.row, column: c.column })));
    flash(`Conflicting values for ${conflicts.length} row(s); resolve them first.`);
    return;
  }
  try {
    const outcome = await state.api.repair(state.sessionId!, wizard.actions());
    state.report = outcome.report;
    state.repairedFile = {
      bytes: decodeBase64(outcome.file_base64),
      name: downloadName(state.filename),
      mediaType: mediaTypeFor(outcome.format),
    };
    wizard.clearEdits();
    flash("Repairs applied.", "info");
    renderDashboard(state);
  } catch (error) {
    if (error instanceof ApiError && error.status === 409) {
      flash(`The service rejected conflicting repairs: ${error.message}`);
    } else {
      flash(describe(error));
    }
  }
}

function highlightConflicts(cells: { row: number; column: string }[]): void {
  for (const tr of document.querySelectorAll<HTMLElement>(".error-row")) {
    const hit = cells.some(
      (cell) => tr.dataset.row === String(cell.row) && tr.dataset.column === cell.column,
    );
    tr.classList.toggle("conflict", hit);
  }
}

// ---------------------------------------------------------------------------
// download

function renderDownload(state: AppState): void {
  const root = document.getElementById("download-body")!;
  root.replaceChildren();
  const file = state.repairedFile ?? {
    bytes: state.originalBytes!,
    name: state.filename,
    mediaType: mediaTypeFor(state.filename.endsWith(".xlsx") ? "xlsx" : "tsv"),
  };
  const link = el("a", { class: "primary" }, `Download ${file.name}`);
  const blob = new Blob([file.bytes.buffer as ArrayBuffer], { type: file.mediaType });
  link.setAttribute("href", URL.createObjectURL(blob));
  link.setAttribute("download", file.name);
  root.append(
    el("p", {}, state.repairedFile
      ? "Your repaired spreadsheet is ready."
      : "No repairs were needed; this is your original file."),
    link,
  );
  show("download");
}

// ---------------------------------------------------------------------------
// wiring

function describe(error: unknown): string {
  if (error instanceof ApiError) return `${error.status}: ${error.message}`;
  return error instanceof Error ? error.message : String(error);
}

async function startValidation(state: AppState): Promise<void> {
  const file = state.upload.file!;
  flash("");
  try {
    const { report, sessionId } = await state.api.validate(file, file.name);
    state.report = report;
    state.sessionId = sessionId;
    state.filename = file.name;
    state.originalBytes = new Uint8Array(await file.arrayBuffer());
    state.repairedFile = null;
    state.template = await state.api.template(report.template_id).catch(() => null);
    renderDashboard(state);
  } catch (error) {
    if (error instanceof ApiError && error.status === 422) {
      flash("Template not identified: the sheet carries no provenance. " + error.message);
    } else {
      flash(describe(error));
    }
  }
}

export function initApp(): void {
  const params = new URLSearchParams(location.search);
  const state: AppState = {
    api: new ApiClient(params.get("service") ?? "http://127.0.0.1:8000"),
    upload: new UploadState(),
    sessionId: null,
    filename: "",
    report: null,
    groups: [],
    template: null,
    repairedFile: null,
    originalBytes: null,
    wizard: null,
    wizardClass: null,
  };

  const zone = document.getElementById("drop-zone")!;
  const input = document.getElementById("file-input") as HTMLInputElement;
  const start = document.getElementById("start-validating") as HTMLButtonElement;
  const chosen = document.getElementById("chosen-file")!;

  wireDropZone(zone, input, (file) => {
    state.upload.select(file);
    chosen.textContent = file.name;
    start.disabled = !state.upload.canStart;
  });
  start.addEventListener("click", () => void startValidation(state));

  document.getElementById("to-summary")!.addEventListener("click", () => renderDashboard(state));
  document.getElementById("to-download")!.addEventListener("click", () => renderDownload(state));
  document.getElementById("back-to-dashboard")!.addEventListener("click", () => renderDashboard(state));
  document.getElementById("start-over")!.addEventListener("click", () => location.reload());

  show("upload");
}

if (typeof document !== "undefined" && document.getElementById("drop-zone")) {
  initApp();
}
