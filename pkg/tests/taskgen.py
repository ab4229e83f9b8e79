"""Seeded random generator of task/heap cases plus invariant checks.

Generation is deterministic per seed. Generated continuations come from a
small terminating family, so every case normalizes well inside the fuel
budget and property failures point at the engine, not at the generator.
"""

from __future__ import annotations

import random
import string
import time
from dataclasses import dataclass

from topflow.protocol import canonical_json, describe
from topflow.semantics import (
    Decide,
    EngineError,
    Insert,
    InsertDescription,
    OptionDescription,
    enumerate_inputs,
    failing,
    handle,
    normalize,
    value,
)
from topflow.tasks import (
    Assign,
    BoolV,
    Change,
    Choose,
    Done,
    Edit,
    Enter,
    Fail,
    Heap,
    IntV,
    Pair,
    Select,
    Step,
    StoreRef,
    Stores,
    StringV,
    Task,
    Trans,
    UnitV,
    Update,
    Value,
    ValueType,
    View,
    Watch,
    type_of,
)

EDITOR_TYPES = (ValueType.INT, ValueType.BOOL, ValueType.STRING)


@dataclass
class Case:
    seed: int
    task: Task
    heap: Heap
    refs: list[StoreRef]


def random_value(rng: random.Random, value_type: ValueType) -> Value:
    if value_type is ValueType.INT:
        return IntV(rng.randint(-50, 50))
    if value_type is ValueType.BOOL:
        return BoolV(rng.random() < 0.5)
    if value_type is ValueType.STRING:
        return StringV("".join(rng.choices(string.ascii_lowercase, k=rng.randint(0, 5))))
    return UnitV()


def _random_editor(rng: random.Random, refs: list[StoreRef]):
    kinds = ["enter", "update", "view"]
    if refs:
        kinds += ["watch", "change"]
    kind = rng.choice(kinds)
    if kind == "enter":
        return Enter(rng.choice(EDITOR_TYPES))
    if kind == "update":
        return Update(random_value(rng, rng.choice(EDITOR_TYPES)))
    if kind == "view":
        return View(random_value(rng, rng.choice(EDITOR_TYPES)))
    ref = rng.choice(refs)
    return Watch(ref) if kind == "watch" else Change(ref)


def _random_continuation(rng: random.Random, depth: int, refs: list[StoreRef]):
    roll = rng.random()
    if roll < 0.35:
        target = random_task(rng, depth, refs)
        return lambda _v, _t=target: _t
    if roll < 0.55:
        return lambda v: Done(v)
    if roll < 0.7:
        return lambda _v: Fail()
    if roll < 0.85:
        return lambda _v: Done(UnitV())
    target = random_task(rng, depth, refs)
    return lambda _v, _t=target: _t


def _random_store_fn(rng: random.Random, ref: StoreRef):
    if rng.random() < 0.5:
        return lambda v: v
    replacement = random_value(rng, ref.value_type)
    return lambda _v, _r=replacement: _r


def random_task(rng: random.Random, depth: int, refs: list[StoreRef]) -> Task:
    if depth <= 0:
        return rng.choice(
            [
                Edit(_random_editor(rng, refs)),
                Done(random_value(rng, rng.choice(EDITOR_TYPES))),
                Fail(),
            ]
        )
    roll = rng.random()
    if roll < 0.3:
        return Edit(_random_editor(rng, refs))
    if roll < 0.38:
        return Done(random_value(rng, rng.choice(EDITOR_TYPES)))
    if roll < 0.44:
        return Fail()
    if roll < 0.56:
        return Pair(random_task(rng, depth - 1, refs), random_task(rng, depth - 1, refs))
    if roll < 0.66:
        return Choose(random_task(rng, depth - 1, refs), random_task(rng, depth - 1, refs))
    if roll < 0.76:
        return Step(random_task(rng, depth - 1, refs), _random_continuation(rng, depth - 1, refs))
    if roll < 0.88:
        labels = rng.sample(["A", "B", "C", "Go", "Send"], k=rng.randint(1, 3))
        options = tuple(
            (label, _random_continuation(rng, depth - 1, refs)) for label in labels
        )
        needs_value = rng.random() < 0.5
        inner = (
            random_task(rng, depth - 1, refs)
            if needs_value
            else Done(UnitV())
        )
        return Select(inner, options, needs_value)
    if roll < 0.94 and refs:
        ref = rng.choice(refs)
        return Assign(ref, _random_store_fn(rng, ref))
    return Trans(lambda v: v, random_task(rng, depth - 1, refs))


def generate_case(seed: int) -> Case:
    rng = random.Random(seed)
    stores = Stores()
    refs = []
    for _ in range(rng.randint(0, 2)):
        vt = rng.choice(EDITOR_TYPES)
        refs.append(stores.share(random_value(rng, vt)))
    task = random_task(rng, rng.randint(1, 4), refs)
    return Case(seed=seed, task=task, heap=stores.heap(), refs=refs)


# ---------------------------------------------------------------------------
# Independent traversal oracle
# ---------------------------------------------------------------------------


def nodes_by_id(task: Task) -> dict[int, Task]:
    """Reference implementation of id assignment: depth-first, a select is
    numbered after its inner subtree."""
    out: list[Task] = []

    def go(t: Task) -> None:
        if isinstance(t, Edit):
            out.append(t)
        elif isinstance(t, Select):
            go(t.inner)
            out.append(t)
        elif isinstance(t, (Pair, Choose)):
            go(t.left)
            go(t.right)
        elif isinstance(t, (Step, Trans)):
            go(t.inner)

    go(task)
    return dict(enumerate(out))


# ---------------------------------------------------------------------------
# Invariant checks
# ---------------------------------------------------------------------------


def _advertises(descriptions, concrete) -> bool:
    for d in descriptions:
        if isinstance(concrete, Insert) and isinstance(d, InsertDescription):
            if d.node_id == concrete.node_id and d.value_type is type_of(concrete.value):
                return True
        if isinstance(concrete, Decide) and isinstance(d, OptionDescription):
            if d.node_id == concrete.node_id and d.label == concrete.label:
                return True
    return False


def check_idempotence(task, heap) -> None:
    again_task, again_heap = normalize(task, heap)
    assert again_task == task, "normalization is not idempotent (task changed)"
    assert again_heap == heap, "normalization is not idempotent (heap changed)"


def check_describe_determinism(task, heap) -> None:
    first = describe(task, heap)
    second = describe(task, heap)
    assert first == second
    assert canonical_json(first) == canonical_json(second)


def check_input_soundness(rng, task, heap) -> None:
    for d in enumerate_inputs(task, heap):
        if isinstance(d, InsertDescription):
            concrete = Insert(d.node_id, random_value(rng, d.value_type))
        else:
            concrete = Decide(d.node_id, d.label)
        handle(task, heap, concrete)  # must not raise


def check_input_completeness(rng, task, heap) -> None:
    descriptions = enumerate_inputs(task, heap)
    max_id = max((d.node_id for d in descriptions), default=0)
    probes = []
    for d in descriptions:
        if isinstance(d, InsertDescription):
            probes.append(Insert(d.node_id, random_value(rng, d.value_type)))
            wrong = rng.choice([vt for vt in EDITOR_TYPES if vt is not d.value_type])
            probes.append(Insert(d.node_id, random_value(rng, wrong)))
            probes.append(Decide(d.node_id, "Go"))
        else:
            probes.append(Decide(d.node_id, d.label))
            probes.append(Decide(d.node_id, d.label + "X"))
            probes.append(Insert(d.node_id, IntV(0)))
    for _ in range(3):
        probes.append(Insert(rng.randint(0, max_id + 3), random_value(rng, rng.choice(EDITOR_TYPES))))
        probes.append(Decide(rng.randint(0, max_id + 3), rng.choice(["A", "B", "Continue"])))
    for concrete in probes:
        advertised = _advertises(descriptions, concrete)
        try:
            handle(task, heap, concrete)
            succeeded = True
        except EngineError:
            succeeded = False
        assert succeeded == advertised, (
            f"handle({concrete}) {'succeeded' if succeeded else 'failed'} but input was "
            f"{'advertised' if advertised else 'not advertised'}"
        )


def check_failing_option_exclusion(task, heap) -> None:
    by_id = nodes_by_id(task)
    for d in enumerate_inputs(task, heap):
        if not isinstance(d, OptionDescription):
            continue
        node = by_id[d.node_id]
        assert isinstance(node, Select)
        inner_value = value(node.inner, heap)
        if inner_value is None:
            inner_value = UnitV()
        cont = dict(node.options)[d.label]
        candidate, candidate_heap = normalize(cont(inner_value), heap)
        assert not failing(candidate, candidate_heap), (
            f"option {d.label!r} advertised but its continuation is failing"
        )


def check_heap_typing(heap, refs) -> None:
    for ref in refs:
        stored = heap.read(ref.store_id)
        assert stored is not None
        assert type_of(stored) is ref.value_type


def check_label_uniqueness(task) -> None:
    for node in nodes_by_id(task).values():
        if isinstance(node, Select):
            labels = [label for label, _ in node.options]
            assert len(labels) == len(set(labels))


def check_ids_agree_with_wire(task, heap) -> None:
    desc = describe(task, heap)
    wire_ids = set()

    def walk(node):
        if isinstance(node, dict):
            if "id" in node:
                wire_ids.add(node["id"])
            for v in node.values():
                walk(v)
        elif isinstance(node, list):
            for v in node:
                walk(v)

    walk(desc["task"])
    assert wire_ids == set(nodes_by_id(task))


def _has_effect_nodes(task) -> bool:
    if isinstance(task, (Assign, Step, Select)):
        return True
    if isinstance(task, (Pair, Choose)):
        return _has_effect_nodes(task.left) or _has_effect_nodes(task.right)
    if isinstance(task, Trans):
        return _has_effect_nodes(task.inner)
    return False


def check_heap_frame(rng, task, heap) -> None:
    """Literal frame property on trees where re-normalization cannot write:
    an insert on a non-store editor leaves the heap as-is."""
    if _has_effect_nodes(task):
        return
    by_id = nodes_by_id(task)
    for d in enumerate_inputs(task, heap):
        if not isinstance(d, InsertDescription):
            continue
        node = by_id[d.node_id]
        if isinstance(node, Edit) and isinstance(node.editor, (Enter, Update)):
            _, new_heap = handle(task, heap, Insert(d.node_id, random_value(rng, d.value_type)))
            assert new_heap.entries == heap.entries
            return


def _oracle_substitute(task, heap, concrete):
    """Reference implementation of what one input does to the tree: pure
    node replacement, no normalization."""
    counter = [0]

    def go(t):
        if isinstance(t, Edit):
            node_id = counter[0]
            counter[0] += 1
            if node_id != concrete.node_id:
                return t, None
            assert isinstance(concrete, Insert)
            if isinstance(t.editor, (Enter, Update)):
                return Edit(Update(concrete.value)), None
            assert isinstance(t.editor, Change)
            return t, (t.editor.store.store_id, concrete.value)
        if isinstance(t, Select):
            inner, write = go(t.inner)
            node_id = counter[0]
            counter[0] += 1
            if node_id == concrete.node_id:
                assert isinstance(concrete, Decide)
                inner_value = value(t.inner, heap)
                if inner_value is None:
                    inner_value = UnitV()
                return dict(t.options)[concrete.label](inner_value), None
            return (t if inner is t.inner else Select(inner, t.options, t.needs_value)), write
        if isinstance(t, (Pair, Choose)):
            left, w1 = go(t.left)
            right, w2 = go(t.right)
            rebuilt = t if left is t.left and right is t.right else type(t)(left, right)
            return rebuilt, w1 or w2
        if isinstance(t, Step):
            inner, write = go(t.inner)
            return (t if inner is t.inner else Step(inner, t.cont)), write
        if isinstance(t, Trans):
            inner, write = go(t.inner)
            return (t if inner is t.inner else Trans(t.fn, inner)), write
        return t, None

    new_task, write = go(task)
    new_heap = heap.write(*write) if write else heap
    return new_task, new_heap


def check_handle_matches_substitution_oracle(rng, task, heap) -> None:
    """handle == (oracle node substitution, then public normalize)."""
    for d in enumerate_inputs(task, heap):
        if isinstance(d, InsertDescription):
            concrete = Insert(d.node_id, random_value(rng, d.value_type))
        else:
            concrete = Decide(d.node_id, d.label)
        got_task, got_heap = handle(task, heap, concrete)
        expected_task, expected_heap = normalize(*_oracle_substitute(task, heap, concrete))
        assert got_task == expected_task
        assert got_heap == expected_heap


def run_case(seed: int) -> None:
    """All invariants over one case, following a short random input walk."""
    case = generate_case(seed)
    rng = random.Random(seed ^ 0x5EED)
    task, heap = normalize(case.task, case.heap)
    for _round in range(3):
        check_idempotence(task, heap)
        check_describe_determinism(task, heap)
        check_ids_agree_with_wire(task, heap)
        check_label_uniqueness(task)
        check_heap_typing(heap, case.refs)
        check_input_soundness(rng, task, heap)
        check_input_completeness(rng, task, heap)
        check_failing_option_exclusion(task, heap)
        check_heap_frame(rng, task, heap)
        check_handle_matches_substitution_oracle(rng, task, heap)
        descriptions = enumerate_inputs(task, heap)
        if not descriptions:
            break
        d = rng.choice(descriptions)
        if isinstance(d, InsertDescription):
            concrete = Insert(d.node_id, random_value(rng, d.value_type))
        else:
            concrete = Decide(d.node_id, d.label)
        task, heap = handle(task, heap, concrete)


def run_suite(case_count: int, base_seed: int = 0) -> float:
    """Runs `case_count` cases; returns elapsed seconds."""
    started = time.perf_counter()
    for i in range(case_count):
        run_case(base_seed + i)
    return time.perf_counter() - started
