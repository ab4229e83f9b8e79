"""JSON wire format for task descriptions and user inputs.

One description bundles the rendered task tree with every input it accepts:
``{"task": <node>, "inputs": [<description>, ...]}``. Node, editor, value,
and input shapes form small closed vocabularies keyed by a ``"type"`` field;
see docs/protocol.md for one golden example of each.
"""

from __future__ import annotations

import itertools
import json
from typing import Any, Iterable

from .semantics import (
    DEFAULT_FUEL,
    AbstractInput,
    ConcreteInput,
    Decide,
    Insert,
    InsertDescription,
    OptionDescription,
    enumerate_inputs,
    normalize,
)
from .tasks import (
    Assign,
    BoolV,
    Change,
    Choose,
    Done,
    Edit,
    Editor,
    Enter,
    Fail,
    Heap,
    IntV,
    Pair,
    Select,
    Step,
    StringV,
    Task,
    Trans,
    UnitV,
    Update,
    Value,
    View,
    Watch,
)

Json = Any


class ProtocolError(Exception):
    """Base for wire-level decode failures; `code` is the wire identifier."""

    code = "protocol-error"


class MalformedJson(ProtocolError):
    code = "malformed-json"


class UnknownInputType(ProtocolError):
    code = "unknown-input-type"


class MissingField(ProtocolError):
    code = "missing-field"

    def __init__(self, field: str) -> None:
        super().__init__(f"missing field {field!r}")
        self.field = field


class UnserializableValue(Exception):
    """An editor reached the wire holding something non-flat: engine bug."""

    code = "unserializable-value"


# ---------------------------------------------------------------------------
# Values
# ---------------------------------------------------------------------------


def encode_value(v: Value) -> Json:
    match v:
        case IntV(n):
            return {"type": "int", "value": n}
        case BoolV(b):
            return {"type": "bool", "value": b}
        case StringV(s):
            return {"type": "string", "value": s}
        case UnitV():
            return {"type": "unit"}
    raise UnserializableValue(f"cannot serialize {v!r}")


def decode_value(obj: Json) -> Value:
    if not isinstance(obj, dict):
        raise MalformedJson(f"value must be an object, got {obj!r}")
    if "type" not in obj:
        raise MissingField("value.type")
    kind = obj["type"]
    if kind == "unit":
        return UnitV()
    if kind not in ("int", "bool", "string"):
        raise MalformedJson(f"unknown value type {kind!r}")
    if "value" not in obj:
        raise MissingField("value")
    raw = obj["value"]
    if kind == "int":
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise MalformedJson(f"int value must be an integer, got {raw!r}")
        return IntV(raw)
    if kind == "bool":
        if not isinstance(raw, bool):
            raise MalformedJson(f"bool value must be a boolean, got {raw!r}")
        return BoolV(raw)
    if not isinstance(raw, str):
        raise MalformedJson(f"string value must be text, got {raw!r}")
    return StringV(raw)


# ---------------------------------------------------------------------------
# Task trees
# ---------------------------------------------------------------------------


def encode_task(t: Task, h: Heap, fuel: int = DEFAULT_FUEL) -> Json:
    """Encodes a normalized task tree, ids assigned, stores read live."""
    inputs = enumerate_inputs(t, h, fuel)
    return _encode_tree(t, h, _labels_by_id(inputs))


def _labels_by_id(inputs: Iterable[AbstractInput]) -> dict[int, list[str]]:
    labels: dict[int, list[str]] = {}
    for d in inputs:
        if isinstance(d, OptionDescription):
            labels.setdefault(d.node_id, []).append(d.label)
    return labels


def _encode_tree(t: Task, h: Heap, labels_by_id: dict[int, list[str]]) -> Json:
    counter = itertools.count()

    def editor_json(editor: Editor) -> Json:
        match editor:
            case Enter(value_type):
                return {"type": "enter", "valueType": value_type.value}
            case Update(v):
                return {"type": "update", "value": encode_value(v)}
            case View(v):
                return {"type": "view", "value": encode_value(v)}
            case Watch(ref) | Change(ref):
                stored = h.read(ref.store_id)
                if stored is None:
                    raise UnserializableValue(
                        f"store {ref.store_id} has no value to display"
                    )
                kind = "watch" if isinstance(editor, Watch) else "change"
                return {"type": kind, "value": encode_value(stored)}
        raise UnserializableValue(f"cannot serialize editor {editor!r}")

    def enc(node: Task) -> Json:
        match node:
            case Edit(editor):
                node_id = next(counter)
                return {"type": "edit", "id": node_id, "editor": editor_json(editor)}
            case Select(inner, _, _):
                inner_json = enc(inner)
                node_id = next(counter)
                return {
                    "type": "select",
                    "id": node_id,
                    "task": inner_json,
                    "labels": list(labels_by_id.get(node_id, [])),
                }
            case Pair(left, right):
                return {"type": "pair", "t1": enc(left), "t2": enc(right)}
            case Choose(left, right):
                return {"type": "choose", "t1": enc(left), "t2": enc(right)}
            case Step(inner, _):
                return {"type": "step", "task": enc(inner)}
            case Trans(_, inner):
                return {"type": "trans", "task": enc(inner)}
            case Done():
                return {"type": "done"}
            case Fail():
                return {"type": "fail"}
            case Assign():
                raise UnserializableValue("pending store effect in a normalized tree")
        raise UnserializableValue(f"cannot serialize {node!r}")

    return enc(t)


# ---------------------------------------------------------------------------
# Inputs
# ---------------------------------------------------------------------------


def encode_input_description(d: AbstractInput) -> Json:
    match d:
        case InsertDescription(node_id, value_type):
            return {"type": "insert", "id": node_id, "valueType": value_type.value}
        case OptionDescription(node_id, label):
            return {"type": "option", "id": node_id, "label": label}
    raise TypeError(f"not an input description: {d!r}")


def encode_inputs(descriptions: Iterable[AbstractInput]) -> Json:
    return [encode_input_description(d) for d in descriptions]


def encode_input(i: ConcreteInput) -> Json:
    match i:
        case Insert(node_id, v):
            return {"type": "insert", "id": node_id, "value": encode_value(v)}
        case Decide(node_id, label):
            return {"type": "decide", "id": node_id, "label": label}
    raise TypeError(f"not a concrete input: {i!r}")


def decode_input(obj: Json) -> ConcreteInput:
    if not isinstance(obj, dict):
        raise MalformedJson(f"input must be an object, got {obj!r}")
    if "type" not in obj:
        raise MissingField("type")
    kind = obj["type"]
    if kind not in ("insert", "decide"):
        raise UnknownInputType(f"unknown input type {kind!r}")
    if "id" not in obj:
        raise MissingField("id")
    node_id = obj["id"]
    if isinstance(node_id, bool) or not isinstance(node_id, int) or node_id < 0:
        raise MalformedJson(f"id must be a non-negative integer, got {node_id!r}")
    if kind == "insert":
        if "value" not in obj:
            raise MissingField("value")
        return Insert(node_id, decode_value(obj["value"]))
    if "label" not in obj:
        raise MissingField("label")
    label = obj["label"]
    if not isinstance(label, str) or not label:
        raise MalformedJson(f"label must be non-empty text, got {label!r}")
    return Decide(node_id, label)


# ---------------------------------------------------------------------------
# Descriptions
# ---------------------------------------------------------------------------


def describe(t: Task, h: Heap, fuel: int = DEFAULT_FUEL) -> Json:
    """Normalizes and bundles the task tree with its possible inputs."""
    t, h = normalize(t, h, fuel)
    inputs = enumerate_inputs(t, h, fuel)
    return {
        "task": _encode_tree(t, h, _labels_by_id(inputs)),
        "inputs": encode_inputs(inputs),
    }


def canonical_json(obj: Json) -> str:
    """Stable byte form used by golden files: sorted keys, no whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
