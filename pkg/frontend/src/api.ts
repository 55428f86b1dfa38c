/** Thin fetch client for the validation service.
 *
 * The service is the single source of truth: the UI never re-validates
 * anything client-side, it only renders reports the service produced.
 */

import type { RepairAction, RepairResponse, Report, SuggestResponse, TemplateDoc } from "./types.js";

export class ApiError extends Error {
  constructor(public readonly status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function errorDetail(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (body && typeof body.detail === "string") return body.detail;
    return JSON.stringify(body);
  } catch {
    return response.statusText || `HTTP ${response.status}`;
  }
}

export class ApiClient {
  private readonly fetchFn: FetchLike;

  constructor(
    public readonly baseUrl: string,
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  private async checked(response: Response): Promise<Response> {
    if (!response.ok) throw new ApiError(response.status, await errorDetail(response));
    return response;
  }

  /** Upload a spreadsheet; returns the report plus the session id header. */
  async validate(
    file: Blob,
    filename: string,
    templateId?: string,
  ): Promise<{ report: Report; sessionId: string }> {
    const form = new FormData();
    form.append("file", file, filename);
    if (templateId) form.append("template_id", templateId);
    const response = await this.checked(
      await this.fetchFn(this.url("/validate"), { method: "POST", body: form }),
    );
    const sessionId = response.headers.get("X-Session-Id") ?? "";
    return { report: (await response.json()) as Report, sessionId };
  }

  async suggest(sessionId: string): Promise<SuggestResponse> {
    const response = await this.checked(
      await this.fetchFn(this.url("/suggest"), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ session_id: sessionId }),
      }),
    );
    return (await response.json()) as SuggestResponse;
  }

  async repair(sessionId: string, actions: RepairAction[]): Promise<RepairResponse> {
    const response = await this.checked(
      await this.fetchFn(this.url("/repair"), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ session_id: sessionId, actions }),
      }),
    );
    return (await response.json()) as RepairResponse;
  }

  async template(id: string): Promise<TemplateDoc> {
    const response = await this.checked(
      await this.fetchFn(this.url(`/templates/${encodeURIComponent(id)}`)),
    );
    return (await response.json()) as TemplateDoc;
  }

  async health(): Promise<{ status: string; version: string; terminology_mode: string }> {
    const response = await this.checked(await this.fetchFn(this.url("/health")));
    return await response.json();
  }
}
