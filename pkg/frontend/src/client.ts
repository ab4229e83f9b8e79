// HTTP layer: the three backend calls, each returning a decoded description
// or a structured error the UI can show without crashing.

import {
  ConcreteInput,
  DecodeError,
  TaskDescription,
  decodeTaskDescription,
} from "./model.js";

export type ApiError =
  | { kind: "network"; detail: string }
  | { kind: "http"; status: number; code: string; detail: string }
  | { kind: "decode"; detail: string };

export type ApiResult =
  | { ok: true; description: TaskDescription }
  | { ok: false; error: ApiError };

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class Client {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(base = "", fetchFn?: FetchLike) {
    this.base = base;
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  getInitialTask(): Promise<ApiResult> {
    return this.call("/initial-task", { method: "GET" });
  }

  interact(input: ConcreteInput): Promise<ApiResult> {
    return this.call("/interact", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(input),
    });
  }

  reset(): Promise<ApiResult> {
    return this.call("/reset", { method: "GET" });
  }

  private async call(path: string, init: RequestInit): Promise<ApiResult> {
    let response: Response;
    try {
      response = await this.fetchFn(this.base + path, init);
    } catch (err) {
      return { ok: false, error: { kind: "network", detail: String(err) } };
    }
    let payload: unknown;
    try {
      payload = await response.json();
    } catch (err) {
      return { ok: false, error: { kind: "decode", detail: `response is not JSON: ${err}` } };
    }
    if (!response.ok) {
      const body = (payload ?? {}) as { error?: unknown; detail?: unknown };
      return {
        ok: false,
        error: {
          kind: "http",
          status: response.status,
          code: typeof body.error === "string" ? body.error : "unknown",
          detail: typeof body.detail === "string" ? body.detail : "",
        },
      };
    }
    try {
      return { ok: true, description: decodeTaskDescription(payload) };
    } catch (err) {
      if (err instanceof DecodeError) {
        return { ok: false, error: { kind: "decode", detail: err.message } };
      }
      throw err;
    }
  }
}
