"""Built-in example workflows and a headless script driver.

Each scenario bundles a program template with replayable demo scripts:
wire-format input sequences plus a fragment the final description must
contain. `replay` folds the pure semantics over such a sequence, which is
also what the CLI's `script` subcommand does.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .protocol import Json, ProtocolError, decode_input, describe
from .semantics import EngineError, handle, normalize
from .tasks import (
    BoolV,
    IntV,
    StoreRef,
    Stores,
    StringV,
    Task,
    TaskTemplate,
    Value,
    ValueType,
    assign_with,
    done,
    enter,
    pair,
    repeat,
    select,
    step_auto,
    step_options,
    step_user,
    view,
    watch,
)


@dataclass(frozen=True)
class Script:
    """One demo run: wire-format inputs and a fragment of the final
    description that proves the run reached the right place."""

    inputs: tuple[dict, ...]
    expected_fragment: Json


@dataclass(frozen=True)
class Scenario:
    name: str
    summary: str
    build: TaskTemplate
    scripts: tuple[Script, ...] = ()


class ReplayError(Exception):
    """A scripted input failed; remembers which step and why."""

    def __init__(self, step: int, code: str, detail: str) -> None:
        super().__init__(f"step {step}: {code}: {detail}")
        self.step = step
        self.code = code
        self.detail = detail


def replay(program: Task | TaskTemplate, wire_inputs: list[dict]) -> Json:
    """Replays wire-format inputs against a fresh program instance and
    returns the final description."""
    from .tasks import instantiate

    task, heap = instantiate(program)
    task, heap = normalize(task, heap)
    for step, wire in enumerate(wire_inputs):
        try:
            concrete = decode_input(wire)
            task, heap = handle(task, heap, concrete)
        except (ProtocolError, EngineError) as exc:
            raise ReplayError(step, exc.code, str(exc)) from exc
    return describe(task, heap)


def contains_fragment(data: Any, fragment: Any) -> bool:
    """True if `fragment` appears somewhere in `data`: every fragment key
    must be present with an exactly equal value."""
    if _matches(data, fragment):
        return True
    if isinstance(data, dict):
        return any(contains_fragment(v, fragment) for v in data.values())
    if isinstance(data, list):
        return any(contains_fragment(v, fragment) for v in data)
    return False


def _matches(node: Any, fragment: Any) -> bool:
    if isinstance(fragment, dict):
        if not isinstance(node, dict):
            return False
        return all(key in node and node[key] == fragment[key] for key in fragment)
    return node == fragment


def _insert_string(node_id: int, text: str) -> dict:
    return {"type": "insert", "id": node_id, "value": {"type": "string", "value": text}}


def _insert_int(node_id: int, n: int) -> dict:
    return {"type": "insert", "id": node_id, "value": {"type": "int", "value": n}}


def _insert_bool(node_id: int, b: bool) -> dict:
    return {"type": "insert", "id": node_id, "value": {"type": "bool", "value": b}}


def _decide(node_id: int, label: str) -> dict:
    return {"type": "decide", "id": node_id, "label": label}


def _view_text(text: str) -> Json:
    return {"type": "view", "value": {"type": "string", "value": text}}


def _unlines(lines: list[str]) -> str:
    """Joins lines with a newline after every line, trailing one included."""
    return "".join(line + "\n" for line in lines)


def _show(v: int | bool) -> str:
    return str(v)


# ---------------------------------------------------------------------------
# greet
# ---------------------------------------------------------------------------


def greet() -> Task:
    """Ask for a name, then greet."""

    def respond(name: Value) -> Task:
        return view(StringV("Hello " + name.value))

    return step_user(enter(ValueType.STRING), respond)


# ---------------------------------------------------------------------------
# candy machine
# ---------------------------------------------------------------------------

CANDY_INTRO = (
    "We offer you three chocolate bars. Pure Chocolate: It's all in the name. "
    "IO Chocolate: Chocolate with unpredictable side effects. "
    "Sem Chocolate: don't try to understand, just eat it!"
)
CANDY_PAY = "You need to pay:"
CANDY_FAIR = "You have paid. Here is your candy. Enjoy it!"
CANDY_EVIL = "You have paid too much! Sorry, no change, but here is your candy."

_CANDY_PRICES = (("Pure Chocolate", 8), ("IO Chocolate", 7), ("Sem Chocolate", 9))
_COINS = (5, 2, 1)


def candy_machine() -> Task:
    """Pick a bar, insert coins until the bill is settled (or overshot)."""
    bars = {name: _candy_entry(price) for name, price in _CANDY_PRICES}
    return pair(view(StringV(CANDY_INTRO)), select(bars))


def _candy_entry(price: int) -> Task:
    return pair(view(StringV(CANDY_PAY)), step_user(view(IntV(price)), _pay_candy))


def _pay_candy(bill: Value) -> Task:
    remaining = bill.value
    coins = select({str(size): view(IntV(remaining - size)) for size in _COINS})

    def settle(left: Value) -> Task:
        if left.value == 0:
            return view(StringV(CANDY_FAIR))
        if left.value < 0:
            return view(StringV(CANDY_EVIL))
        return _pay_candy(left)

    return step_user(coins, settle)


# ---------------------------------------------------------------------------
# calorie calculator
# ---------------------------------------------------------------------------

CALORIES_INTRO = _unlines(
    [
        "This tool estimates your resting metabolic rate,",
        "i.e. the number of  calories you have to consume",
        "per day to maintain your weight.",
        'Press "Continue" to start',
    ]
)

_ACTIVITY_FACTORS = {
    "Sedentary": 1.2,
    "Low active": 1.375,
    "Active": 1.55,
    "Very Active": 1.725,
}


def resting_calories(gender: str, activity: str, height: int, weight: int, age: int) -> int:
    """Mifflin-St Jeor estimate scaled by activity, truncated to whole
    calories."""
    base = 10 * weight + 6.25 * height - 5 * age + (5 if gender == "Male" else -161)
    return int(base * _ACTIVITY_FACTORS[activity])


def _prompt_enter(label: str, value_type: ValueType) -> Task:
    return pair(view(StringV(label)), enter(value_type))


def _prompt_select(label: str, options: dict[str, Task]) -> Task:
    return pair(view(StringV(label)), select(options))


def calorie_calculator() -> Task:
    """Sequential prompts for body data, then the daily calorie figure."""

    def start(_: Value) -> Task:
        def with_height(p) -> Task:
            _, height = p

            def with_weight(p) -> Task:
                _, weight = p

                def with_age(p) -> Task:
                    _, age = p

                    def with_gender(p) -> Task:
                        _, gender = p

                        def with_activity(p) -> Task:
                            _, activity = p
                            calories = resting_calories(
                                gender.value,
                                activity.value,
                                height.value,
                                weight.value,
                                age.value,
                            )
                            return view(
                                StringV(
                                    "Your resting metabolic rate is: "
                                    f"{calories} calories per day."
                                )
                            )

                        return step_auto(
                            _prompt_select(
                                "What is your activity level?",
                                {
                                    label: done(StringV(label))
                                    for label in _ACTIVITY_FACTORS
                                },
                            ),
                            with_activity,
                        )

                    return step_auto(
                        _prompt_select(
                            "Select your gender:",
                            {
                                "Male": done(StringV("Male")),
                                "Female": done(StringV("Female")),
                            },
                        ),
                        with_gender,
                    )

                return step_auto(_prompt_enter("Enter your age:", ValueType.INT), with_age)

            return step_auto(
                _prompt_enter("Enter your weight in kg:", ValueType.INT), with_weight
            )

        return step_auto(
            _prompt_enter("Enter your height in cm:", ValueType.INT), with_height
        )

    return step_user(view(StringV(CALORIES_INTRO)), start)


# ---------------------------------------------------------------------------
# chat session
# ---------------------------------------------------------------------------


def chat_session(stores: Stores) -> Task:
    """Two chat boxes appending to one watched history store."""
    history = stores.share(StringV(""))
    return pair(
        watch(history),
        pair(_chat_box("Tim", history), _chat_box("Nico", history)),
    )


def _chat_box(name: str, history: StoreRef) -> Task:
    def send(msg: Value) -> Task:
        return _append_message(history, name, msg.value)

    return repeat(step_options(enter(ValueType.STRING), {"Send": send}))


def _append_message(history: StoreRef, name: str, msg: str) -> Task:
    def add(current: Value) -> Value:
        text = current.value
        prefix = text if text == "" else text + "\n"
        return StringV(prefix + name + ": '" + msg + "'")

    return assign_with(history, add)


# ---------------------------------------------------------------------------
# tax subsidy
# ---------------------------------------------------------------------------

TAX_TODAY = 100


def tax() -> Task:
    """Citizen files an invoice, company confirms, officer approves, and the
    subsidy outcome is summarized."""
    documents = pair(
        pair(enter(ValueType.INT), enter(ValueType.INT)),
        enter(ValueType.BOOL),
    )

    def after_documents(filed) -> Task:
        (amount, invoice_date), confirmed = filed
        approved = TAX_TODAY - invoice_date.value < 365 and confirmed.value

        def after_officer(verdict: Value) -> Task:
            subsidy = min(600, amount.value // 10) if verdict.value else 0
            summary = _unlines(
                [
                    "Subsidy amount: " + _show(subsidy),
                    "Approved: " + _show(verdict.value),
                    "Confirmed: " + _show(confirmed.value),
                    "Invoice date: " + _show(invoice_date.value),
                    "Today: " + _show(TAX_TODAY),
                ]
            )
            return view(StringV(summary))

        return step_user(view(BoolV(approved)), after_officer)

    return step_user(documents, after_documents)


def tax_summary(amount: int, invoice_date: int, confirmed: bool) -> str:
    """The summary text the tax workflow ends in, for the given filing."""
    approved = TAX_TODAY - invoice_date < 365 and confirmed
    subsidy = min(600, amount // 10) if approved else 0
    return _unlines(
        [
            "Subsidy amount: " + _show(subsidy),
            "Approved: " + _show(approved),
            "Confirmed: " + _show(confirmed),
            "Invoice date: " + _show(invoice_date),
            "Today: " + _show(TAX_TODAY),
        ]
    )


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

GREET_SCRIPT = Script(
    inputs=(_insert_string(0, "Alice"), _decide(1, "Continue")),
    expected_fragment=_view_text("Hello Alice"),
)

CANDY_FAIR_SCRIPT = Script(
    # IO Chocolate costs 7; coins 5 then 2 settle the bill exactly.
    inputs=(
        _decide(1, "IO Chocolate"),
        _decide(3, "Continue"),
        _decide(2, "5"),
        _decide(3, "Continue"),
        _decide(2, "2"),
        _decide(3, "Continue"),
    ),
    expected_fragment=_view_text(CANDY_FAIR),
)

CANDY_EVIL_SCRIPT = Script(
    # Pure Chocolate costs 8; paying 5 + 5 overshoots by 2.
    inputs=(
        _decide(1, "Pure Chocolate"),
        _decide(3, "Continue"),
        _decide(2, "5"),
        _decide(3, "Continue"),
        _decide(2, "5"),
        _decide(3, "Continue"),
    ),
    expected_fragment=_view_text(CANDY_EVIL),
)

CALORIES_SCRIPT = Script(
    inputs=(
        _decide(1, "Continue"),
        _insert_int(1, 180),
        _insert_int(1, 80),
        _insert_int(1, 30),
        _decide(1, "Male"),
        _decide(1, "Sedentary"),
    ),
    expected_fragment=_view_text(
        f"Your resting metabolic rate is: "
        f"{resting_calories('Male', 'Sedentary', 180, 80, 30)} calories per day."
    ),
)

CHAT_SCRIPT = Script(
    inputs=(
        _insert_string(1, "hi"),
        _decide(2, "Send"),
        _insert_string(3, "yo"),
        _decide(4, "Send"),
    ),
    expected_fragment={
        "type": "watch",
        "value": {"type": "string", "value": "Tim: 'hi'\nNico: 'yo'"},
    },
)


def _tax_script(amount: int, invoice_date: int, confirmed: bool) -> Script:
    return Script(
        inputs=(
            _insert_int(0, amount),
            _insert_int(1, invoice_date),
            _insert_bool(2, confirmed),
            _decide(3, "Continue"),
            _decide(1, "Continue"),
        ),
        expected_fragment=_view_text(tax_summary(amount, invoice_date, confirmed)),
    )


TAX_SCRIPT_SMALL = _tax_script(1000, 0, True)
TAX_SCRIPT_CAPPED = _tax_script(10000, 0, True)
TAX_SCRIPT_DENIED = _tax_script(1000, 0, False)

SCENARIOS: dict[str, Scenario] = {
    "greet": Scenario(
        name="greet",
        summary="ask for a name and greet",
        build=lambda _stores: greet(),
        scripts=(GREET_SCRIPT,),
    ),
    "candy": Scenario(
        name="candy",
        summary="candy vending machine with coin payment",
        build=lambda _stores: candy_machine(),
        scripts=(CANDY_FAIR_SCRIPT, CANDY_EVIL_SCRIPT),
    ),
    "calories": Scenario(
        name="calories",
        summary="resting metabolic rate calculator",
        build=lambda _stores: calorie_calculator(),
        scripts=(CALORIES_SCRIPT,),
    ),
    "chat": Scenario(
        name="chat",
        summary="two-user chat over a shared history store",
        build=chat_session,
        scripts=(CHAT_SCRIPT,),
    ),
    "tax": Scenario(
        name="tax",
        summary="tax subsidy request, confirmation, and approval",
        build=lambda _stores: tax(),
        scripts=(TAX_SCRIPT_SMALL, TAX_SCRIPT_CAPPED, TAX_SCRIPT_DENIED),
    ),
}
