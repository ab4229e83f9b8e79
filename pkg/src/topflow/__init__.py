"""Task-oriented workflow runtime.

Programs are immutable task trees built from editors and combinators;
`semantics` rewrites them under user input, `protocol` speaks JSON, and
`server` exposes a live session over HTTP for the generic web UI.
"""

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
    SemanticValue,
    Step,
    StoreRef,
    Stores,
    StringV,
    Task,
    TaskTemplate,
    Trans,
    UnitV,
    Update,
    Value,
    ValueType,
    View,
    Watch,
    assign_with,
    change,
    choose,
    done,
    enter,
    fail,
    instantiate,
    pair,
    repeat,
    select,
    step_auto,
    step_options,
    step_user,
    trans,
    type_of,
    update,
    view,
    watch,
)
from .semantics import (
    DEFAULT_FUEL,
    AbstractInput,
    ConcreteInput,
    Decide,
    EngineError,
    ForeignStore,
    FuelExhausted,
    Insert,
    InsertDescription,
    LabelDisabled,
    OptionDescription,
    StoreTypeMismatch,
    TypeMismatch,
    UnknownId,
    enumerate_inputs,
    failing,
    handle,
    normalize,
    value,
)
from .protocol import (
    MalformedJson,
    MissingField,
    ProtocolError,
    UnknownInputType,
    UnserializableValue,
    canonical_json,
    decode_input,
    describe,
    encode_input,
    encode_inputs,
    encode_task,
    encode_value,
)
from .scenarios import SCENARIOS, ReplayError, Scenario, Script, contains_fragment, replay
from .server import RunningServer, ServerStartupError, create_app, visualize_task

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
