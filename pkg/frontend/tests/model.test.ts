import { describe, expect, it } from "vitest";

import {
  DecodeError,
  decodeTaskDescription,
  decodeValue,
  treeIds,
} from "../src/model.js";

const greetStart = {
  task: {
    type: "select",
    id: 1,
    task: { type: "edit", id: 0, editor: { type: "enter", valueType: "string" } },
    labels: [],
  },
  inputs: [{ type: "insert", id: 0, valueType: "string" }],
};

describe("decodeTaskDescription", () => {
  it("decodes the greet start description", () => {
    const desc = decodeTaskDescription(greetStart);
    expect(desc.task.type).toBe("select");
    expect(desc.inputs).toEqual([{ type: "insert", id: 0, valueType: "string" }]);
  });

  it("decodes every node and editor type", () => {
    const desc = decodeTaskDescription({
      task: {
        type: "pair",
        t1: {
          type: "choose",
          t1: { type: "edit", id: 0, editor: { type: "view", value: { type: "int", value: 1 } } },
          t2: { type: "fail" },
        },
        t2: {
          type: "step",
          task: {
            type: "trans",
            task: {
              type: "select",
              id: 2,
              task: {
                type: "edit",
                id: 1,
                editor: { type: "watch", value: { type: "string", value: "a\nb" } },
              },
              labels: ["Go"],
            },
          },
        },
      },
      inputs: [{ type: "option", id: 2, label: "Go" }],
    });
    expect(treeIds(desc.task)).toEqual(new Set([0, 1, 2]));
  });

  it("rejects unknown task types with a path", () => {
    expect(() =>
      decodeTaskDescription({ task: { type: "loop" }, inputs: [] }),
    ).toThrowError(/task\.type.*loop/);
  });

  it("rejects unknown editor and value types", () => {
    expect(() =>
      decodeTaskDescription({
        task: { type: "edit", id: 0, editor: { type: "slider", value: { type: "int", value: 1 } } },
        inputs: [],
      }),
    ).toThrowError(DecodeError);
    expect(() => decodeValue({ type: "float", value: 1.5 })).toThrowError(/float/);
  });

  it("rejects malformed ids and labels", () => {
    expect(() =>
      decodeTaskDescription({
        task: { type: "edit", id: -1, editor: { type: "enter", valueType: "int" } },
        inputs: [],
      }),
    ).toThrowError(/task\.id/);
    expect(() =>
      decodeTaskDescription({
        task: { type: "done" },
        inputs: [{ type: "option", id: 0, label: "" }],
      }),
    ).toThrowError(/inputs\[0\]\.label/);
  });

  it("rejects non-integer ints", () => {
    expect(() => decodeValue({ type: "int", value: 1.5 })).toThrowError(/integer/);
  });

  it("round-trips values through JSON", () => {
    const samples = [
      { type: "int", value: -7 },
      { type: "bool", value: true },
      { type: "string", value: "hé\nllo" },
      { type: "unit" },
    ];
    for (const sample of samples) {
      expect(decodeValue(JSON.parse(JSON.stringify(sample)))).toEqual(sample);
    }
  });
});
