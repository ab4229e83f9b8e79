// Wire schema types and a total decoder. Anything outside the closed
// vocabularies raises a DecodeError naming the offending path, so the UI can
// show a diagnostic instead of a blank screen.

export type ValueTypeName = "int" | "bool" | "string" | "unit";

export type WireValue =
  | { type: "int"; value: number }
  | { type: "bool"; value: boolean }
  | { type: "string"; value: string }
  | { type: "unit" };

export type WireEditor =
  | { type: "enter"; valueType: ValueTypeName }
  | { type: "update"; value: WireValue }
  | { type: "view"; value: WireValue }
  | { type: "watch"; value: WireValue }
  | { type: "change"; value: WireValue };

export type TaskNode =
  | { type: "edit"; id: number; editor: WireEditor }
  | { type: "select"; id: number; task: TaskNode; labels: string[] }
  | { type: "pair"; t1: TaskNode; t2: TaskNode }
  | { type: "choose"; t1: TaskNode; t2: TaskNode }
  | { type: "step"; task: TaskNode }
  | { type: "trans"; task: TaskNode }
  | { type: "done" }
  | { type: "fail" };

export type InputDescription =
  | { type: "insert"; id: number; valueType: ValueTypeName }
  | { type: "option"; id: number; label: string };

export interface TaskDescription {
  task: TaskNode;
  inputs: InputDescription[];
}

export type ConcreteInput =
  | { type: "insert"; id: number; value: WireValue }
  | { type: "decide"; id: number; label: string };

export class DecodeError extends Error {
  constructor(
    public readonly path: string,
    detail: string,
  ) {
    super(`${path}: ${detail}`);
    this.name = "DecodeError";
  }
}

function asObject(raw: unknown, path: string): Record<string, unknown> {
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new DecodeError(path, "expected an object");
  }
  return raw as Record<string, unknown>;
}

function asId(raw: unknown, path: string): number {
  if (typeof raw !== "number" || !Number.isInteger(raw) || raw < 0) {
    throw new DecodeError(path, "expected a non-negative integer id");
  }
  return raw;
}

const VALUE_TYPE_NAMES: ValueTypeName[] = ["int", "bool", "string", "unit"];

function asValueTypeName(raw: unknown, path: string): ValueTypeName {
  if (typeof raw !== "string" || !VALUE_TYPE_NAMES.includes(raw as ValueTypeName)) {
    throw new DecodeError(path, `unknown value type ${JSON.stringify(raw)}`);
  }
  return raw as ValueTypeName;
}

export function decodeValue(raw: unknown, path = "value"): WireValue {
  const obj = asObject(raw, path);
  switch (obj.type) {
    case "int":
      if (typeof obj.value !== "number" || !Number.isInteger(obj.value)) {
        throw new DecodeError(`${path}.value`, "expected an integer");
      }
      return { type: "int", value: obj.value };
    case "bool":
      if (typeof obj.value !== "boolean") {
        throw new DecodeError(`${path}.value`, "expected a boolean");
      }
      return { type: "bool", value: obj.value };
    case "string":
      if (typeof obj.value !== "string") {
        throw new DecodeError(`${path}.value`, "expected a string");
      }
      return { type: "string", value: obj.value };
    case "unit":
      return { type: "unit" };
    default:
      throw new DecodeError(`${path}.type`, `unknown value type ${JSON.stringify(obj.type)}`);
  }
}

export function decodeEditor(raw: unknown, path: string): WireEditor {
  const obj = asObject(raw, path);
  switch (obj.type) {
    case "enter":
      return { type: "enter", valueType: asValueTypeName(obj.valueType, `${path}.valueType`) };
    case "update":
    case "view":
    case "watch":
    case "change":
      return { type: obj.type, value: decodeValue(obj.value, `${path}.value`) };
    default:
      throw new DecodeError(`${path}.type`, `unknown editor type ${JSON.stringify(obj.type)}`);
  }
}

export function decodeTask(raw: unknown, path = "task"): TaskNode {
  const obj = asObject(raw, path);
  switch (obj.type) {
    case "edit":
      return {
        type: "edit",
        id: asId(obj.id, `${path}.id`),
        editor: decodeEditor(obj.editor, `${path}.editor`),
      };
    case "select": {
      if (!Array.isArray(obj.labels) || obj.labels.some((l) => typeof l !== "string")) {
        throw new DecodeError(`${path}.labels`, "expected an array of strings");
      }
      return {
        type: "select",
        id: asId(obj.id, `${path}.id`),
        task: decodeTask(obj.task, `${path}.task`),
        labels: obj.labels as string[],
      };
    }
    case "pair":
    case "choose":
      return {
        type: obj.type,
        t1: decodeTask(obj.t1, `${path}.t1`),
        t2: decodeTask(obj.t2, `${path}.t2`),
      };
    case "step":
    case "trans":
      return { type: obj.type, task: decodeTask(obj.task, `${path}.task`) };
    case "done":
      return { type: "done" };
    case "fail":
      return { type: "fail" };
    default:
      throw new DecodeError(`${path}.type`, `unknown task type ${JSON.stringify(obj.type)}`);
  }
}

export function decodeInputDescription(raw: unknown, path: string): InputDescription {
  const obj = asObject(raw, path);
  switch (obj.type) {
    case "insert":
      return {
        type: "insert",
        id: asId(obj.id, `${path}.id`),
        valueType: asValueTypeName(obj.valueType, `${path}.valueType`),
      };
    case "option": {
      if (typeof obj.label !== "string" || obj.label === "") {
        throw new DecodeError(`${path}.label`, "expected a non-empty string");
      }
      return { type: "option", id: asId(obj.id, `${path}.id`), label: obj.label };
    }
    default:
      throw new DecodeError(`${path}.type`, `unknown input type ${JSON.stringify(obj.type)}`);
  }
}

export function decodeTaskDescription(raw: unknown): TaskDescription {
  const obj = asObject(raw, "description");
  if (!Array.isArray(obj.inputs)) {
    throw new DecodeError("description.inputs", "expected an array");
  }
  return {
    task: decodeTask(obj.task, "task"),
    inputs: obj.inputs.map((entry, i) => decodeInputDescription(entry, `inputs[${i}]`)),
  };
}

/** Ids of all addressable nodes present in a decoded tree. */
export function treeIds(node: TaskNode): Set<number> {
  const ids = new Set<number>();
  const walk = (n: TaskNode): void => {
    switch (n.type) {
      case "edit":
        ids.add(n.id);
        break;
      case "select":
        walk(n.task);
        ids.add(n.id);
        break;
      case "pair":
      case "choose":
        walk(n.t1);
        walk(n.t2);
        break;
      case "step":
      case "trans":
        walk(n.task);
        break;
      case "done":
      case "fail":
        break;
    }
  };
  walk(node);
  return ids;
}
