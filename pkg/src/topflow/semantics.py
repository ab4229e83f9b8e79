"""Small-step interaction semantics for task trees.

`normalize` rewrites a task to a fixpoint where only user input can cause
further progress, `value` and `failing` observe normalized trees,
`enumerate_inputs` lists everything a user could do right now, and `handle`
applies one concrete input. All functions are pure: they take and return
(task, heap) snapshots, so callers keep the previous state on any error.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Union

from .tasks import (
    Assign,
    Change,
    Choose,
    Done,
    Edit,
    Editor,
    Enter,
    Fail,
    Heap,
    Pair,
    Select,
    SemanticValue,
    Step,
    StoreRef,
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

DEFAULT_FUEL = 10_000

# Nested guard evaluations (a select option whose continuation again needs
# guard checks, and so on) recurse through Python frames; unproductive
# recursion is cut off here and reported as divergence.
MAX_GUARD_DEPTH = 200


class EngineError(Exception):
    """Base for interpreter failures; `code` is the wire error identifier."""

    code = "engine-error"


class FuelExhausted(EngineError):
    code = "fuel-exhausted"


class ForeignStore(EngineError):
    code = "foreign-store"


class StoreTypeMismatch(EngineError):
    code = "store-type-mismatch"


class UnknownId(EngineError):
    code = "unknown-id"


class TypeMismatch(EngineError):
    code = "type-mismatch"


class LabelDisabled(EngineError):
    code = "label-disabled"


@dataclass(frozen=True)
class Insert:
    """Concrete input: put `value` into the editor addressed by `node_id`."""

    node_id: int
    value: Value


@dataclass(frozen=True)
class Decide:
    """Concrete input: pick option `label` on the select addressed by
    `node_id`."""

    node_id: int
    label: str


ConcreteInput = Union[Insert, Decide]


@dataclass(frozen=True)
class InsertDescription:
    """Advertised input: the editor at `node_id` accepts a `value_type`."""

    node_id: int
    value_type: ValueType


@dataclass(frozen=True)
class OptionDescription:
    """Advertised input: option `label` on select `node_id` is enabled."""

    node_id: int
    label: str


AbstractInput = Union[InsertDescription, OptionDescription]


class _Budget:
    """Shared rewrite budget for one public operation."""

    __slots__ = ("remaining", "guard_depth")

    def __init__(self, fuel: int) -> None:
        self.remaining = fuel
        self.guard_depth = 0

    def charge(self) -> None:
        self.remaining -= 1
        if self.remaining < 0:
            raise FuelExhausted(
                "task did not settle within the rewrite budget; it likely diverges"
            )

    def enter_guard(self) -> None:
        self.guard_depth += 1
        if self.guard_depth > MAX_GUARD_DEPTH:
            raise FuelExhausted(
                "guard evaluation recursed past the depth limit; the task likely diverges"
            )

    def exit_guard(self) -> None:
        self.guard_depth -= 1


# ---------------------------------------------------------------------------
# Observations
# ---------------------------------------------------------------------------


def value(t: Task, h: Heap) -> SemanticValue | None:
    """The task's current value, or None while it has none.

    Expects a normalized task but is total over raw trees too.
    """
    match t:
        case Edit(editor):
            match editor:
                case Update(v) | View(v):
                    return v
                case Watch(ref) | Change(ref):
                    return h.read(ref.store_id)
                case _:
                    return None
        case Done(v):
            return v
        case Pair(left, right):
            lv = value(left, h)
            if lv is None:
                return None
            rv = value(right, h)
            if rv is None:
                return None
            return (lv, rv)
        case Choose(left, right):
            lv = value(left, h)
            if lv is not None:
                return lv
            return value(right, h)
        case Trans(fn, inner):
            iv = value(inner, h)
            return None if iv is None else fn(iv)
        case _:
            return None


def failing(t: Task, h: Heap, fuel: int = DEFAULT_FUEL) -> bool:
    """Whether the task can never produce a value (no input path helps).

    The heap is needed because select options are enabled by speculatively
    normalizing their continuations, which may read or write stores.
    """
    return _failing(t, h, _Budget(fuel))


def _failing(t: Task, h: Heap, budget: _Budget) -> bool:
    match t:
        case Fail():
            return True
        case Edit() | Done() | Assign():
            return False
        case Pair(left, right) | Choose(left, right):
            return _failing(left, h, budget) and _failing(right, h, budget)
        case Trans(_, inner) | Step(inner, _):
            return _failing(inner, h, budget)
        case Select(inner, _, _):
            if _failing(inner, h, budget):
                return True
            if value(inner, h) is None:
                return False
            return not _enabled_labels(t, h, budget)
    raise TypeError(f"not a task node: {t!r}")


def _enabled_labels(sel: Select, h: Heap, budget: _Budget) -> list[str]:
    """Labels whose continuation, applied to the inner value, stays viable.

    Speculative normalization effects are discarded; only the verdict is
    kept.
    """
    v = value(sel.inner, h)
    if v is None:
        if sel.needs_value:
            return []
        v = UnitV()
    enabled = []
    for label, cont in sel.options:
        budget.charge()
        budget.enter_guard()
        try:
            candidate, candidate_heap = _normalize(cont(v), h, budget)
            if not _failing(candidate, candidate_heap, budget):
                enabled.append(label)
        finally:
            budget.exit_guard()
    return enabled


# ---------------------------------------------------------------------------
# Normalization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _PairRight:
    node: Pair


@dataclass(frozen=True)
class _PairJoin:
    node: Pair
    left: Task


@dataclass(frozen=True)
class _ChooseRight:
    node: Choose


@dataclass(frozen=True)
class _ChooseJoin:
    node: Choose
    left: Task


@dataclass(frozen=True)
class _TransJoin:
    node: Trans


@dataclass(frozen=True)
class _SelectJoin:
    node: Select


@dataclass(frozen=True)
class _StepInner:
    node: Step


@dataclass(frozen=True)
class _StepGuard:
    node: Step
    inner: Task
    saved_heap: Heap
    saved_progress: bool


def normalize(t: Task, h: Heap, fuel: int = DEFAULT_FUEL) -> tuple[Task, Heap]:
    """Rewrites to a fixpoint: steps fire while viable, store effects run
    leftmost-first, and the result offers work only to the user."""
    return _normalize(t, h, _Budget(fuel))


def _normalize(t: Task, h: Heap, budget: _Budget) -> tuple[Task, Heap]:
    while True:
        t, h, progressed = _run_pass(t, h, budget)
        if not progressed:
            return t, h


def _run_pass(task: Task, heap: Heap, budget: _Budget) -> tuple[Task, Heap, bool]:
    """One full left-to-right rewriting sweep.

    Implemented with an explicit frame stack: speculative evaluation of a
    step continuation pushes a guard frame instead of recursing, so fuel
    (not the Python stack) bounds divergent programs like a repeat over an
    already-finished body.
    """
    progressed = False
    stack: list = []
    current = task
    evaluating = True
    while True:
        if evaluating:
            t = current
            if isinstance(t, (Done, Fail)):
                evaluating = False
            elif isinstance(t, Edit):
                _check_editor_stores(t.editor, heap)
                evaluating = False
            elif isinstance(t, Assign):
                heap = _execute_assign(t, heap)
                budget.charge()
                progressed = True
                current = Done(UnitV())
                evaluating = False
            elif isinstance(t, Pair):
                stack.append(_PairRight(t))
                current = t.left
            elif isinstance(t, Choose):
                stack.append(_ChooseRight(t))
                current = t.left
            elif isinstance(t, Trans):
                stack.append(_TransJoin(t))
                current = t.inner
            elif isinstance(t, Select):
                stack.append(_SelectJoin(t))
                current = t.inner
            elif isinstance(t, Step):
                stack.append(_StepInner(t))
                current = t.inner
            else:
                raise TypeError(f"not a task node: {t!r}")
            continue

        if not stack:
            return current, heap, progressed
        frame = stack.pop()
        if isinstance(frame, _PairRight):
            stack.append(_PairJoin(frame.node, current))
            current = frame.node.right
            evaluating = True
        elif isinstance(frame, _PairJoin):
            node = frame.node
            if frame.left is node.left and current is node.right:
                current = node
            else:
                current = Pair(frame.left, current)
        elif isinstance(frame, _ChooseRight):
            stack.append(_ChooseJoin(frame.node, current))
            current = frame.node.right
            evaluating = True
        elif isinstance(frame, _ChooseJoin):
            node = frame.node
            if frame.left is node.left and current is node.right:
                current = node
            else:
                current = Choose(frame.left, current)
        elif isinstance(frame, _TransJoin):
            node = frame.node
            current = node if current is node.inner else Trans(node.fn, current)
        elif isinstance(frame, _SelectJoin):
            node = frame.node
            if current is node.inner:
                current = node
            else:
                current = Select(current, node.options, node.needs_value)
        elif isinstance(frame, _StepInner):
            node = frame.node
            inner = current
            v = value(inner, heap)
            if v is None:
                current = node if inner is node.inner else Step(inner, node.cont)
            else:
                budget.charge()
                stack.append(_StepGuard(node, inner, heap, progressed))
                progressed = False
                current = node.cont(v)
                evaluating = True
        elif isinstance(frame, _StepGuard):
            if _failing(current, heap, budget):
                # Guarded: keep the step and discard speculative effects.
                heap = frame.saved_heap
                progressed = frame.saved_progress
                node = frame.node
                if frame.inner is node.inner:
                    current = node
                else:
                    current = Step(frame.inner, node.cont)
            else:
                progressed = True
        else:
            raise AssertionError(f"unknown frame {frame!r}")


def _check_store(ref: StoreRef, heap: Heap) -> Value:
    existing = heap.read(ref.store_id)
    if existing is None:
        raise ForeignStore(f"store {ref.store_id} was not issued by this engine")
    if type_of(existing) is not ref.value_type:
        raise StoreTypeMismatch(
            f"store {ref.store_id} holds {type_of(existing).value}, "
            f"reference expects {ref.value_type.value}"
        )
    return existing


def _check_editor_stores(editor: Editor, heap: Heap) -> None:
    if isinstance(editor, (Watch, Change)):
        _check_store(editor.store, heap)


def _execute_assign(node: Assign, heap: Heap) -> Heap:
    current = _check_store(node.store, heap)
    replacement = node.fn(current)
    if not isinstance(replacement, Value) or type_of(replacement) is not node.store.value_type:
        raise StoreTypeMismatch(
            f"assign to store {node.store.store_id} produced {replacement!r}, "
            f"expected a {node.store.value_type.value} value"
        )
    return heap.write(node.store.store_id, replacement)


# ---------------------------------------------------------------------------
# Inputs
# ---------------------------------------------------------------------------

# Node ids address editors and selects. They are derived per description by
# a depth-first walk (a select is numbered after its inner subtree), so they
# are stable between interactions and regenerated after each one.


def enumerate_inputs(t: Task, h: Heap, fuel: int = DEFAULT_FUEL) -> list[AbstractInput]:
    """All inputs the normalized task currently accepts, in id order."""
    budget = _Budget(fuel)
    counter = itertools.count()
    out: list[AbstractInput] = []

    def walk(node: Task) -> None:
        match node:
            case Edit(editor):
                node_id = next(counter)
                match editor:
                    case Enter(value_type):
                        out.append(InsertDescription(node_id, value_type))
                    case Update(v):
                        out.append(InsertDescription(node_id, type_of(v)))
                    case Change(ref):
                        out.append(InsertDescription(node_id, ref.value_type))
                    case _:
                        pass
            case Select(inner, _, _):
                walk(inner)
                node_id = next(counter)
                for label in _enabled_labels(node, h, budget):
                    out.append(OptionDescription(node_id, label))
            case Pair(left, right) | Choose(left, right):
                walk(left)
                walk(right)
            case Step(inner, _) | Trans(_, inner):
                walk(inner)
            case _:
                pass

    walk(t)
    return out


def enabled_labels(sel: Select, h: Heap, fuel: int = DEFAULT_FUEL) -> list[str]:
    """Currently enabled option labels of one select node."""
    return _enabled_labels(sel, h, _Budget(fuel))


def handle(t: Task, h: Heap, concrete: ConcreteInput, fuel: int = DEFAULT_FUEL) -> tuple[Task, Heap]:
    """Applies one concrete input to a normalized task and re-normalizes.

    Succeeds exactly for inputs that concretize an advertised description;
    anything else raises and leaves the caller's state untouched.
    """
    if not isinstance(concrete, (Insert, Decide)):
        raise TypeError(f"not a concrete input: {concrete!r}")
    budget = _Budget(fuel)
    counter = itertools.count()
    new_heap = h
    applied = False

    def apply_editor(node: Edit) -> Task:
        nonlocal new_heap
        if not isinstance(concrete, Insert):
            raise UnknownId(f"id {concrete.node_id} addresses an editor, not a select")
        editor = node.editor
        v = concrete.value
        if isinstance(editor, Enter):
            if type_of(v) is not editor.value_type:
                raise TypeMismatch(
                    f"editor {concrete.node_id} accepts {editor.value_type.value}, "
                    f"got {type_of(v).value}"
                )
            return Edit(Update(v))
        if isinstance(editor, Update):
            held = type_of(editor.value)
            if type_of(v) is not held:
                raise TypeMismatch(
                    f"editor {concrete.node_id} holds {held.value}, got {type_of(v).value}"
                )
            return Edit(Update(v))
        if isinstance(editor, Change):
            expected = editor.store.value_type
            if type_of(v) is not expected:
                raise TypeMismatch(
                    f"editor {concrete.node_id} writes {expected.value}, got {type_of(v).value}"
                )
            _check_store(editor.store, new_heap)
            new_heap = new_heap.write(editor.store.store_id, v)
            return node
        raise UnknownId(f"id {concrete.node_id} addresses a read-only editor")

    def apply_select(node: Select) -> Task:
        if not isinstance(concrete, Decide):
            raise UnknownId(f"id {concrete.node_id} addresses a select, not an editor")
        enabled = _enabled_labels(node, h, budget)
        if concrete.label not in enabled:
            raise LabelDisabled(
                f"option {concrete.label!r} is not currently offered on id {concrete.node_id}"
            )
        v = value(node.inner, h)
        if v is None:
            v = UnitV()
        cont = dict(node.options)[concrete.label]
        return cont(v)

    def rebuild(node: Task) -> Task:
        nonlocal applied
        match node:
            case Edit():
                node_id = next(counter)
                if node_id == concrete.node_id:
                    applied = True
                    return apply_editor(node)
                return node
            case Select(inner, options, needs_value):
                new_inner = rebuild(inner)
                node_id = next(counter)
                if node_id == concrete.node_id:
                    applied = True
                    return apply_select(node)
                if new_inner is inner:
                    return node
                return Select(new_inner, options, needs_value)
            case Pair(left, right):
                new_left = rebuild(left)
                new_right = rebuild(right)
                if new_left is left and new_right is right:
                    return node
                return Pair(new_left, new_right)
            case Choose(left, right):
                new_left = rebuild(left)
                new_right = rebuild(right)
                if new_left is left and new_right is right:
                    return node
                return Choose(new_left, new_right)
            case Step(inner, cont):
                new_inner = rebuild(inner)
                return node if new_inner is inner else Step(new_inner, cont)
            case Trans(fn, inner):
                new_inner = rebuild(inner)
                return node if new_inner is inner else Trans(fn, new_inner)
            case _:
                return node

    new_task = rebuild(t)
    if not applied:
        raise UnknownId(f"no addressable node with id {concrete.node_id}")
    return _normalize(new_task, new_heap, budget)
