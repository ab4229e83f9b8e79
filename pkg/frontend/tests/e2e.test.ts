// @vitest-environment jsdom
//
// End-to-end smoke: a real backend process, the real client, and the real
// DOM (jsdom) driven through rendered controls.

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { App, startApp } from "../src/app.js";
import { Backend, startBackend } from "./helpers.js";

const fetchFn = (input: string, init?: RequestInit) => fetch(input, init);

function mountPoint(): HTMLElement {
  document.body.innerHTML = '<div id="app"></div>';
  return document.getElementById("app") as HTMLElement;
}

async function boot(base: string): Promise<{ app: App; root: HTMLElement }> {
  const root = mountPoint();
  const app = startApp({ root, base, fetchFn });
  await app.whenIdle();
  return { app, root };
}

function click(root: HTMLElement, selector: string): void {
  const el = root.querySelector<HTMLElement>(selector);
  if (el === null) {
    throw new Error(`nothing matches ${selector}; html: ${root.innerHTML}`);
  }
  el.click();
}

async function decide(app: App, root: HTMLElement, label: string): Promise<void> {
  click(root, `button.select-button[data-label=${JSON.stringify(label)}]`);
  await app.whenIdle();
}

describe("greet end-to-end", () => {
  let backend: Backend;

  beforeAll(async () => {
    backend = await startBackend("greet");
  }, 40_000);

  afterAll(async () => {
    await backend.stop();
  });

  it("drives the flow through rendered controls", { timeout: 30_000 }, async () => {
    const { app, root } = await boot(backend.base);
    const field = root.querySelector<HTMLInputElement>("input.control-string");
    expect(field).not.toBeNull();
    field!.value = "Alice";
    click(root, 'button.update-button[data-editor-id="0"]');
    await app.whenIdle();
    await decide(app, root, "Continue");
    expect(root.querySelector(".view-text")?.textContent).toBe("Hello Alice");
  });

  it("resets back to the initial form", { timeout: 30_000 }, async () => {
    const { app, root } = await boot(backend.base);
    click(root, "button.reset-button");
    await app.whenIdle();
    const field = root.querySelector<HTMLInputElement>("input.control-string");
    expect(field).not.toBeNull();
    expect(field!.value).toBe("");
  });

  it("surfaces semantic rejections inline without losing the view", { timeout: 30_000 }, async () => {
    // Two tabs share the single session; the slower tab goes stale.
    const rootA = mountPoint();
    const appA = startApp({ root: rootA, base: backend.base, fetchFn });
    await appA.whenIdle();
    click(rootA, "button.reset-button");
    await appA.whenIdle();

    const rootB = document.createElement("div");
    document.body.appendChild(rootB);
    const appB = startApp({ root: rootB, base: backend.base, fetchFn });
    await appB.whenIdle();

    // Tab A completes the flow; tab B still shows the entry form.
    const fieldA = rootA.querySelector<HTMLInputElement>("input.control-string")!;
    fieldA.value = "Alice";
    click(rootA, 'button.update-button[data-editor-id="0"]');
    await appA.whenIdle();
    await decide(appA, rootA, "Continue");

    // Tab B's insert now addresses a read-only node: inline 422, view kept.
    const fieldB = rootB.querySelector<HTMLInputElement>("input.control-string")!;
    fieldB.value = "Bob";
    click(rootB, 'button.update-button[data-editor-id="0"]');
    await appB.whenIdle();
    expect(rootB.querySelector(".control-error")?.textContent).toContain("unknown-id");
    expect(rootB.querySelector("input.control-string")).not.toBeNull();
  });
});

describe("candy machine end-to-end", () => {
  let backend: Backend;

  beforeAll(async () => {
    backend = await startBackend("candy");
  }, 40_000);

  afterAll(async () => {
    await backend.stop();
  });

  it("buys IO Chocolate with exact payment", { timeout: 30_000 }, async () => {
    const { app, root } = await boot(backend.base);
    expect(root.textContent).toContain("We offer you three chocolate bars.");
    await decide(app, root, "IO Chocolate");
    expect(root.textContent).toContain("You need to pay:");
    expect(root.textContent).toContain("7");
    await decide(app, root, "Continue");
    await decide(app, root, "5");
    await decide(app, root, "Continue");
    await decide(app, root, "2");
    await decide(app, root, "Continue");
    expect(root.textContent).toContain("You have paid. Here is your candy. Enjoy it!");
  });
});

describe("unreachable backend", () => {
  it("shows a retry banner instead of crashing", { timeout: 30_000 }, async () => {
    const { root } = await boot("http://127.0.0.1:9");
    expect(root.querySelector(".banner")).not.toBeNull();
    expect(root.textContent).toContain("cannot reach the backend");
    expect(root.querySelector(".retry-button")).not.toBeNull();
  });
});
