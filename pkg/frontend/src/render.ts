// Generic rendering: a decoded task tree becomes a lightweight VNode tree,
// and `mount` turns VNodes into real DOM. Keeping render pure over data
// makes it testable without a browser.

import { TaskDescription, TaskNode, ValueTypeName, WireEditor, WireValue, treeIds } from "./model.js";

export type VChild = VNode | string;

export interface VNode {
  tag: string;
  props?: Record<string, unknown>;
  children?: VChild[];
}

export interface Actions {
  /** Raw control content: string for text/number controls, boolean for checkboxes. */
  onInsert(id: number, valueType: ValueTypeName, raw: string | boolean): void;
  onDecide(id: number, label: string): void;
  onReset(): void;
  onRetry(): void;
}

export interface ViewState {
  description: TaskDescription | null;
  banner: string | null;
  diagnostic: string | null;
  inflight: boolean;
  controlErrors: Map<number, string>;
}

function h(tag: string, props?: Record<string, unknown>, children?: VChild[]): VNode {
  return { tag, props, children };
}

function showValue(value: WireValue): string {
  switch (value.type) {
    case "int":
      return String(value.value);
    case "bool":
      return value.value ? "True" : "False";
    case "string":
      return value.value;
    case "unit":
      return "()";
  }
}

function readonlyText(editor: WireEditor & { type: "view" | "watch" }): VNode {
  // Line breaks matter (chat history, summaries): pre-wrap via class.
  return h("div", { className: "editor editor-readonly" }, [
    h("span", { className: "view-text" }, [showValue(editor.value)]),
  ]);
}

function control(
  id: number,
  valueType: ValueTypeName,
  initial: WireValue | null,
  state: ViewState,
  actions: Actions,
): VNode {
  const error = state.controlErrors.get(id);
  const children: VChild[] = [];
  if (valueType === "bool") {
    const box: { el: HTMLInputElement | null } = { el: null };
    children.push(
      h("input", {
        type: "checkbox",
        className: "control control-bool",
        checked: initial !== null && initial.type === "bool" && initial.value,
        disabled: state.inflight,
        ref: (el: HTMLInputElement) => (box.el = el),
      }),
    );
    children.push(
      h(
        "button",
        {
          className: "update-button",
          disabled: state.inflight,
          "data-editor-id": String(id),
          onclick: () => actions.onInsert(id, valueType, box.el ? box.el.checked : false),
        },
        ["Update"],
      ),
    );
  } else if (valueType === "unit") {
    children.push(
      h(
        "button",
        {
          className: "update-button",
          disabled: state.inflight,
          "data-editor-id": String(id),
          onclick: () => actions.onInsert(id, valueType, ""),
        },
        ["Update"],
      ),
    );
  } else {
    const box: { el: HTMLInputElement | null } = { el: null };
    children.push(
      h("input", {
        type: valueType === "int" ? "number" : "text",
        className: `control control-${valueType}`,
        value: initial === null ? "" : showValue(initial),
        disabled: state.inflight,
        ref: (el: HTMLInputElement) => (box.el = el),
      }),
    );
    children.push(
      h(
        "button",
        {
          className: "update-button",
          disabled: state.inflight,
          "data-editor-id": String(id),
          onclick: () => actions.onInsert(id, valueType, box.el ? box.el.value : ""),
        },
        ["Update"],
      ),
    );
  }
  if (error) {
    children.push(h("div", { className: "control-error" }, [error]));
  }
  return h("div", { className: "editor editor-control" }, children);
}

function renderEditor(id: number, editor: WireEditor, state: ViewState, actions: Actions): VNode {
  switch (editor.type) {
    case "view":
    case "watch":
      return readonlyText(editor as WireEditor & { type: "view" | "watch" });
    case "enter":
      return control(id, editor.valueType, null, state, actions);
    case "update":
    case "change":
      return control(id, editor.value.type, editor.value, state, actions);
  }
}

export function renderTask(node: TaskNode, state: ViewState, actions: Actions): VNode {
  switch (node.type) {
    case "edit":
      return h("div", { className: "task task-edit", "data-node-id": String(node.id) }, [
        renderEditor(node.id, node.editor, state, actions),
      ]);
    case "select": {
      const children: VChild[] = [];
      // The inner done of a plain choice carries no information; skip it.
      if (node.task.type !== "done") {
        children.push(renderTask(node.task, state, actions));
      }
      children.push(
        h(
          "div",
          { className: "select-buttons" },
          node.labels.map((label) =>
            h(
              "button",
              {
                className: "select-button",
                disabled: state.inflight,
                "data-node-id": String(node.id),
                "data-label": label,
                onclick: () => actions.onDecide(node.id, label),
              },
              [label],
            ),
          ),
        ),
      );
      return h("div", { className: "task task-select", "data-node-id": String(node.id) }, children);
    }
    case "pair":
      return h("div", { className: "task task-pair" }, [
        h("div", { className: "pane" }, [renderTask(node.t1, state, actions)]),
        h("div", { className: "pane" }, [renderTask(node.t2, state, actions)]),
      ]);
    case "choose":
      return h("div", { className: "task task-choose" }, [
        h("div", { className: "pane" }, [renderTask(node.t1, state, actions)]),
        h("div", { className: "pane" }, [renderTask(node.t2, state, actions)]),
      ]);
    case "step":
    case "trans":
      return renderTask(node.task, state, actions);
    case "done":
      return h("div", { className: "task task-done" }, ["Task completed."]);
    case "fail":
      return h("div", { className: "task task-fail" }, ["This branch is not available."]);
  }
}

function missingIds(description: TaskDescription): number[] {
  const present = treeIds(description.task);
  const missing: number[] = [];
  for (const input of description.inputs) {
    if (!present.has(input.id)) {
      missing.push(input.id);
    }
  }
  return missing;
}

export function renderApp(state: ViewState, actions: Actions): VNode {
  const children: VChild[] = [
    h("header", { className: "topbar" }, [
      h("span", { className: "title" }, ["topflow"]),
      h(
        "button",
        { className: "reset-button", disabled: state.inflight, onclick: () => actions.onReset() },
        ["Reset"],
      ),
    ]),
  ];
  if (state.banner !== null) {
    children.push(
      h("div", { className: "banner" }, [
        state.banner,
        h("button", { className: "retry-button", onclick: () => actions.onRetry() }, ["Retry"]),
      ]),
    );
  }
  if (state.diagnostic !== null) {
    children.push(h("div", { className: "diagnostic" }, [state.diagnostic]));
  }
  if (state.description !== null) {
    const orphans = missingIds(state.description);
    if (orphans.length > 0) {
      children.push(
        h("div", { className: "diagnostic" }, [
          `backend advertised inputs for missing nodes: ${orphans.join(", ")}`,
        ]),
      );
    }
    children.push(
      h("main", { className: "workspace" }, [renderTask(state.description.task, state, actions)]),
    );
  }
  return h("div", { className: "app" }, children);
}

/** Replaces `container`'s content with the rendered VNode tree. */
export function mount(vnode: VNode, container: Element): void {
  container.replaceChildren(build(vnode, container.ownerDocument));
}

function build(vnode: VNode, doc: Document): Element {
  const el = doc.createElement(vnode.tag);
  const props = vnode.props ?? {};
  for (const [key, raw] of Object.entries(props)) {
    if (raw === undefined || raw === null) {
      continue;
    }
    if (key === "ref") {
      (raw as (el: Element) => void)(el);
    } else if (key.startsWith("on") && typeof raw === "function") {
      el.addEventListener(key.slice(2), raw as EventListener);
    } else if (key === "className") {
      el.setAttribute("class", String(raw));
    } else if (key === "value") {
      (el as HTMLInputElement).value = String(raw);
    } else if (key === "checked") {
      (el as HTMLInputElement).checked = Boolean(raw);
    } else if (key === "disabled") {
      if (raw) {
        el.setAttribute("disabled", "");
      }
    } else {
      el.setAttribute(key, String(raw));
    }
  }
  for (const child of vnode.children ?? []) {
    if (typeof child === "string") {
      el.appendChild(doc.createTextNode(child));
    } else {
      el.appendChild(build(child, doc));
    }
  }
  return el;
}

/** Convenience for tests: all text contained in a VNode tree, in order. */
export function vnodeText(node: VChild): string {
  if (typeof node === "string") {
    return node;
  }
  return (node.children ?? []).map(vnodeText).join("");
}

/** Convenience for tests: depth-first search over a VNode tree. */
export function findVNodes(node: VChild, predicate: (v: VNode) => boolean): VNode[] {
  if (typeof node === "string") {
    return [];
  }
  const hits: VNode[] = [];
  if (predicate(node)) {
    hits.push(node);
  }
  for (const child of node.children ?? []) {
    hits.push(...findVNodes(child, predicate));
  }
  return hits;
}

