// Application controller: holds the latest description (nothing else), maps
// user events to concrete inputs, and re-renders from every response.

import { ApiResult, Client } from "./client.js";
import { ConcreteInput, TaskDescription, ValueTypeName, WireValue } from "./model.js";
import { Actions, ViewState, mount, renderApp } from "./render.js";

const INTEGER_RE = /^-?\d+$/;

export class App {
  private state: ViewState = {
    description: null,
    banner: null,
    diagnostic: null,
    inflight: false,
    controlErrors: new Map(),
  };
  private pending: Promise<void> | null = null;

  constructor(
    private readonly root: Element,
    private readonly client: Client,
  ) {}

  async start(): Promise<void> {
    await this.perform(() => this.client.getInitialTask());
  }

  /** Settles once no request is in flight; for tests and scripting. */
  async whenIdle(): Promise<void> {
    while (this.pending !== null) {
      await this.pending;
    }
  }

  private readonly actions: Actions = {
    onInsert: (id, valueType, raw) => {
      const value = this.encodeControlValue(id, valueType, raw);
      if (value === null) {
        return;
      }
      void this.perform(() => this.client.interact({ type: "insert", id, value }), id);
    },
    onDecide: (id, label) => {
      const input: ConcreteInput = { type: "decide", id, label };
      void this.perform(() => this.client.interact(input), id);
    },
    onReset: () => {
      void this.perform(() => this.client.reset());
    },
    onRetry: () => {
      void this.perform(() => this.client.getInitialTask());
    },
  };

  private encodeControlValue(
    id: number,
    valueType: ValueTypeName,
    raw: string | boolean,
  ): WireValue | null {
    switch (valueType) {
      case "bool":
        return { type: "bool", value: raw === true };
      case "unit":
        return { type: "unit" };
      case "int": {
        const text = String(raw).trim();
        if (!INTEGER_RE.test(text)) {
          // Rejected client-side; the wire int is an integer.
          this.state.controlErrors.set(id, "enter a whole number");
          this.render();
          return null;
        }
        return { type: "int", value: Number(text) };
      }
      case "string":
        return { type: "string", value: String(raw) };
    }
  }

  private async perform(call: () => Promise<ApiResult>, controlId?: number): Promise<void> {
    if (this.state.inflight) {
      return; // one request at a time; late clicks are dropped
    }
    this.state.inflight = true;
    this.state.controlErrors = new Map();
    this.render();
    const task = call().then(
      (result) => this.apply(result, controlId),
      (err) => {
        // Client calls report failures as values; a rejection here is a
        // bug, but it must not wedge the UI in the in-flight state.
        this.state.inflight = false;
        this.state.banner = `unexpected error: ${err}`;
        this.render();
      },
    );
    this.pending = task.finally(() => {
      this.pending = null;
    });
    await this.pending;
  }

  private apply(result: ApiResult, controlId?: number): void {
    this.state.inflight = false;
    if (result.ok) {
      this.state.description = result.description;
      this.state.banner = null;
      this.state.diagnostic = null;
    } else {
      const error = result.error;
      if (error.kind === "network") {
        this.state.banner = `cannot reach the backend: ${error.detail}`;
      } else if (error.kind === "decode") {
        this.state.diagnostic = `response could not be decoded: ${error.detail}`;
      } else if (error.status === 422 && controlId !== undefined) {
        // Semantic rejection: annotate the offending control in place.
        this.state.controlErrors.set(controlId, `${error.code}: ${error.detail}`);
      } else {
        this.state.banner = `server rejected the request (${error.status} ${error.code}): ${error.detail}`;
      }
    }
    this.render();
  }

  private render(): void {
    mount(renderApp(this.state, this.actions), this.root);
  }
}

export interface StartOptions {
  root: Element;
  base?: string;
  fetchFn?: ConstructorParameters<typeof Client>[1];
}

export function startApp(options: StartOptions): App {
  const app = new App(options.root, new Client(options.base ?? "", options.fetchFn));
  void app.start();
  return app;
}

export type { TaskDescription };
