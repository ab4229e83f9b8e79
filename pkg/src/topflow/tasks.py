"""Task trees, editors, values, and shared stores.

A workflow program is an immutable tree of task nodes. Leaf editors model
user interaction, combinators compose tasks (parallel-and, parallel-or,
sequence, labeled choice), and shared stores let sibling tasks communicate
through a heap. Interpreting these trees is the job of `semantics`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Mapping, Union


class ValueType(enum.Enum):
    """Editor payload types; the enum value doubles as the wire name."""

    INT = "int"
    BOOL = "bool"
    STRING = "string"
    UNIT = "unit"


class Value:
    """Base class for the closed family of editor payloads."""

    __slots__ = ()


@dataclass(frozen=True)
class IntV(Value):
    value: int

    def __post_init__(self) -> None:
        # bool is an int subclass; keep the variants disjoint.
        if isinstance(self.value, bool) or not isinstance(self.value, int):
            raise TypeError(f"IntV needs an int, got {self.value!r}")


@dataclass(frozen=True)
class BoolV(Value):
    value: bool

    def __post_init__(self) -> None:
        if not isinstance(self.value, bool):
            raise TypeError(f"BoolV needs a bool, got {self.value!r}")


@dataclass(frozen=True)
class StringV(Value):
    value: str

    def __post_init__(self) -> None:
        if not isinstance(self.value, str):
            raise TypeError(f"StringV needs a str, got {self.value!r}")


@dataclass(frozen=True)
class UnitV(Value):
    pass


def type_of(v: Value) -> ValueType:
    """Total mapping from value variant to its type tag."""
    match v:
        case IntV():
            return ValueType.INT
        case BoolV():
            return ValueType.BOOL
        case StringV():
            return ValueType.STRING
        case UnitV():
            return ValueType.UNIT
    raise TypeError(f"not a value: {v!r}")


# Semantic values are what combinators pass to continuations: either a flat
# editor payload or a (nested) pair of semantic values. Pairs never reach
# editors or the wire.
SemanticValue = Union[Value, tuple]


def is_semantic_value(v: object) -> bool:
    if isinstance(v, Value):
        return True
    return (
        isinstance(v, tuple)
        and len(v) == 2
        and is_semantic_value(v[0])
        and is_semantic_value(v[1])
    )


@dataclass(frozen=True)
class StoreRef:
    """Handle to one shared store; issued by `Stores.share`."""

    store_id: int
    value_type: ValueType

    def __post_init__(self) -> None:
        if self.store_id < 0:
            raise ValueError("store ids are non-negative")


@dataclass(frozen=True)
class Heap:
    """Immutable snapshot of all shared stores (store id -> value)."""

    entries: dict[int, Value] = field(default_factory=dict)

    def read(self, store_id: int) -> Value | None:
        return self.entries.get(store_id)

    def write(self, store_id: int, v: Value) -> "Heap":
        updated = dict(self.entries)
        updated[store_id] = v
        return Heap(updated)

    def __contains__(self, store_id: int) -> bool:
        return store_id in self.entries


class Editor:
    """Base class for the closed family of interaction leaves."""

    __slots__ = ()


@dataclass(frozen=True)
class Enter(Editor):
    """Empty typed input container; filling it turns it into `Update`."""

    value_type: ValueType

    def __post_init__(self) -> None:
        if not isinstance(self.value_type, ValueType):
            raise TypeError(f"Enter needs a ValueType, got {self.value_type!r}")
        if self.value_type is ValueType.UNIT:
            raise ValueError("an empty unit editor has nothing to enter")


@dataclass(frozen=True)
class Update(Editor):
    """Editable editor holding a current value."""

    value: Value

    def __post_init__(self) -> None:
        if not isinstance(self.value, Value):
            raise TypeError(f"Update holds a Value, got {self.value!r}")


@dataclass(frozen=True)
class View(Editor):
    """Read-only editor."""

    value: Value

    def __post_init__(self) -> None:
        if not isinstance(self.value, Value):
            raise TypeError(f"View holds a Value, got {self.value!r}")


@dataclass(frozen=True)
class Watch(Editor):
    """Read-only live view of a shared store."""

    store: StoreRef

    def __post_init__(self) -> None:
        if not isinstance(self.store, StoreRef):
            raise TypeError("Watch needs a StoreRef")


@dataclass(frozen=True)
class Change(Editor):
    """Editable view of a shared store; inserts write through."""

    store: StoreRef

    def __post_init__(self) -> None:
        if not isinstance(self.store, StoreRef):
            raise TypeError("Change needs a StoreRef")


class Task:
    """Base class for the closed family of task nodes."""

    __slots__ = ()


# Continuations and transformers are host functions and must be pure: the
# interpreter may call them repeatedly (guard checks, re-observations), and
# determinism of the runtime is only as good as theirs.
Continuation = Callable[[SemanticValue], "Task"]

# Ordered (label, continuation) pairs of a Select node.
Options = tuple[tuple[str, Continuation], ...]


@dataclass(frozen=True)
class Edit(Task):
    editor: Editor

    def __post_init__(self) -> None:
        if not isinstance(self.editor, Editor):
            raise TypeError(f"Edit wraps an Editor, got {self.editor!r}")


@dataclass(frozen=True)
class Select(Task):
    """Labeled choice over continuations of the inner task's value.

    `needs_value` records the flavor: options built by a user step consume
    the inner value and stay disabled until it exists; plain-select options
    ignore it.
    """

    inner: Task
    options: Options
    needs_value: bool

    def __post_init__(self) -> None:
        if not isinstance(self.inner, Task):
            raise TypeError("Select inner must be a Task")
        if not self.options:
            raise ValueError("Select needs at least one option")
        seen = set()
        for label, cont in self.options:
            if not isinstance(label, str) or not label:
                raise ValueError(f"option labels are non-empty text, got {label!r}")
            if label in seen:
                raise ValueError(f"duplicate option label {label!r}")
            if not callable(cont):
                raise TypeError(f"option {label!r} needs a continuation")
            seen.add(label)


@dataclass(frozen=True)
class Pair(Task):
    left: Task
    right: Task

    def __post_init__(self) -> None:
        if not isinstance(self.left, Task) or not isinstance(self.right, Task):
            raise TypeError("Pair combines two Tasks")


@dataclass(frozen=True)
class Choose(Task):
    left: Task
    right: Task

    def __post_init__(self) -> None:
        if not isinstance(self.left, Task) or not isinstance(self.right, Task):
            raise TypeError("Choose combines two Tasks")


@dataclass(frozen=True)
class Step(Task):
    """Automatic sequence: fires once the inner task has a value and the
    continuation's result is viable."""

    inner: Task
    cont: Continuation

    def __post_init__(self) -> None:
        if not isinstance(self.inner, Task):
            raise TypeError("Step inner must be a Task")
        if not callable(self.cont):
            raise TypeError("Step needs a continuation")


@dataclass(frozen=True)
class Trans(Task):
    """Applies a host function to the inner task's observed value."""

    fn: Callable[[SemanticValue], SemanticValue]
    inner: Task

    def __post_init__(self) -> None:
        if not callable(self.fn):
            raise TypeError("Trans needs a function")
        if not isinstance(self.inner, Task):
            raise TypeError("Trans inner must be a Task")


@dataclass(frozen=True)
class Done(Task):
    value: SemanticValue

    def __post_init__(self) -> None:
        if not is_semantic_value(self.value):
            raise TypeError(f"Done carries a semantic value, got {self.value!r}")


@dataclass(frozen=True)
class Fail(Task):
    pass


@dataclass(frozen=True)
class Assign(Task):
    """Store-write effect: replaces the store content with fn(current)."""

    store: StoreRef
    fn: Callable[[Value], Value]

    def __post_init__(self) -> None:
        if not isinstance(self.store, StoreRef):
            raise TypeError("Assign needs a StoreRef")
        if not callable(self.fn):
            raise TypeError("Assign needs a transformer")


# ---------------------------------------------------------------------------
# Public constructors
# ---------------------------------------------------------------------------


def enter(value_type: ValueType) -> Task:
    """Empty typed input editor. Rejects the unit type."""
    return Edit(Enter(value_type))


def update(v: Value) -> Task:
    """Editable editor pre-filled with `v`."""
    return Edit(Update(v))


def view(v: Value) -> Task:
    """Read-only editor showing `v`."""
    return Edit(View(v))


def watch(ref: StoreRef) -> Task:
    """Read-only live view of a shared store."""
    return Edit(Watch(ref))


def change(ref: StoreRef) -> Task:
    """Editable view of a shared store."""
    return Edit(Change(ref))


def pair(left: Task, right: Task) -> Task:
    """Parallel-and: both sides run, the value is the pair of both values."""
    return Pair(left, right)


def choose(left: Task, right: Task) -> Task:
    """Parallel-or: the observed value is the left one if present, else the
    right one."""
    return Choose(left, right)


def done(v: SemanticValue) -> Task:
    return Done(v)


def fail() -> Task:
    return Fail()


def step_auto(t: Task, cont: Continuation) -> Task:
    """Sequence that advances on its own once `t` produces a value."""
    return Step(t, cont)


def _as_options(options: Mapping[str, Continuation]) -> Options:
    if isinstance(options, Mapping):
        items = tuple(options.items())
    else:
        items = tuple(options)
    return items


def step_options(t: Task, options: Mapping[str, Continuation]) -> Task:
    """Sequence that advances when the user picks one of the labeled
    continuations; labels stay disabled until `t` has a value."""
    return Select(t, _as_options(options), needs_value=True)


def step_user(t: Task, cont: Continuation) -> Task:
    """Sequence gated behind an explicit Continue action."""
    return step_options(t, {"Continue": cont})


def select(options: Mapping[str, Task]) -> Task:
    """Labeled choice between tasks; a label is offered only while its task
    is viable."""
    items = _as_options(options)  # values are Tasks here, lifted below

    def lift(task: Task) -> Continuation:
        if not isinstance(task, Task):
            raise TypeError(f"select maps labels to Tasks, got {task!r}")
        return lambda _v, _task=task: _task

    lifted = tuple((label, lift(task)) for label, task in items)
    return Select(Done(UnitV()), lifted, needs_value=False)


def trans(fn: Callable[[SemanticValue], SemanticValue], t: Task) -> Task:
    """Maps `fn` over the value of `t`; rendering shows `t` unchanged."""
    return Trans(fn, t)


def assign_with(ref: StoreRef, fn: Callable[[Value], Value]) -> Task:
    """Effect task rewriting the store to fn(current value)."""
    return Assign(ref, fn)


def repeat(t: Task) -> Task:
    """Restarts `t` from its (immutable) template every time it completes.

    A body that completes without user input diverges by design and is
    reported as fuel exhaustion by the interpreter.
    """
    return Step(t, lambda _v: repeat(t))


# ---------------------------------------------------------------------------
# Shared store allocation
# ---------------------------------------------------------------------------


class Stores:
    """Allocator handed to program templates; issues fresh store ids and
    accumulates the initial heap."""

    def __init__(self) -> None:
        self._entries: dict[int, Value] = {}

    def share(self, v: Value) -> StoreRef:
        """Creates a shared store initialized to `v` and returns its handle."""
        if not isinstance(v, Value):
            raise TypeError(f"stores hold Values, got {v!r}")
        store_id = len(self._entries)
        self._entries[store_id] = v
        return StoreRef(store_id, type_of(v))

    def heap(self) -> Heap:
        return Heap(dict(self._entries))


# A program template builds a fresh task against a fresh store allocator.
TaskTemplate = Callable[[Stores], Task]


def instantiate(program: Task | TaskTemplate) -> tuple[Task, Heap]:
    """Builds a fresh (task, heap) pair from a template or a bare task.

    Bare tasks cannot reference shared stores; templates receive a `Stores`
    allocator and may.
    """
    if isinstance(program, Task):
        return program, Heap({})
    stores = Stores()
    task = program(stores)
    if not isinstance(task, Task):
        raise TypeError(f"template returned {task!r}, not a Task")
    return task, stores.heap()
