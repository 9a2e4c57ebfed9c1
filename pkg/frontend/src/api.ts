/** Thin typed client for the session service's JSON endpoints. */

import type {
  ControlResult,
  ModuleDetail,
  ModuleSummary,
  Snapshot,
  SubmissionResult,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export interface ApiResponse<T> {
  status: number;
  body: T;
}

export class Api {
  constructor(
    private readonly base: string = "",
    private readonly token: string | null = null,
    private readonly fetchImpl: FetchLike = (input, init) =>
      fetch(input, init),
  ) {}

  private conductorHeaders(): Record<string, string> {
    return this.token !== null ? { "X-Conductor-Token": this.token } : {};
  }

  async listModules(): Promise<ModuleSummary[]> {
    const resp = await this.fetchImpl(`${this.base}/api/modules`);
    return (await resp.json()) as ModuleSummary[];
  }

  async getModule(name: string): Promise<ModuleDetail | null> {
    const resp = await this.fetchImpl(
      `${this.base}/api/modules/${encodeURIComponent(name)}`,
    );
    if (resp.status === 404) return null;
    return (await resp.json()) as ModuleDetail;
  }

  async getSnapshot(): Promise<Snapshot> {
    const resp = await this.fetchImpl(`${this.base}/api/snapshot`);
    return (await resp.json()) as Snapshot;
  }

  async submitEditable(
    name: string,
    editableText: string,
    baseVersion: number,
  ): Promise<ApiResponse<SubmissionResult>> {
    const resp = await this.fetchImpl(
      `${this.base}/api/modules/${encodeURIComponent(name)}/editable`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ editableText, baseVersion }),
      },
    );
    return { status: resp.status, body: (await resp.json()) as SubmissionResult };
  }

  async control(
    command: string,
    mode?: string,
    pauseMs?: number,
  ): Promise<ApiResponse<ControlResult>> {
    const payload: Record<string, unknown> = { command };
    if (mode !== undefined) payload.mode = mode;
    if (pauseMs !== undefined) payload.pauseMs = pauseMs;
    const resp = await this.fetchImpl(`${this.base}/api/control`, {
      method: "POST",
      headers: { "Content-Type": "application/json", ...this.conductorHeaders() },
      body: JSON.stringify(payload),
    });
    const raw = (await resp.json()) as Record<string, unknown>;
    // auth failures arrive as {detail}, control outcomes as {ok, message}
    const message =
      typeof raw.message === "string"
        ? raw.message
        : typeof raw.detail === "string"
          ? raw.detail
          : `request failed with status ${resp.status}`;
    return {
      status: resp.status,
      body: { ok: raw.ok === true, message },
    };
  }
}
