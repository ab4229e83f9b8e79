"""Command line interface: list scenarios, serve one, or replay a script.

Exit codes: 0 success, 1 script replay failure, 2 usage errors (including
unknown scenario names).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .scenarios import SCENARIOS, ReplayError, Scenario, replay
from .server import DEFAULT_HOST, DEFAULT_PORT, ServerStartupError, visualize_task


def _usage_error(message: str) -> int:
    print(f"topflow: {message}", file=sys.stderr)
    return 2


def _resolve_scenario(name: str) -> Scenario | None:
    if name not in SCENARIOS:
        known = ", ".join(SCENARIOS)
        _usage_error(f"unknown example {name!r}; available examples: {known}")
        return None
    return SCENARIOS[name]


def _resolve_port(flag_value: int | None) -> int | None:
    """Flag beats the PORT environment variable beats the default."""
    if flag_value is not None:
        return flag_value
    env_value = os.environ.get("PORT")
    if env_value is not None:
        try:
            return int(env_value)
        except ValueError:
            _usage_error(f"PORT must be an integer, got {env_value!r}")
            return None
    return DEFAULT_PORT


def _cmd_list(_: argparse.Namespace) -> int:
    for name in SCENARIOS:
        print(name)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    scenario = _resolve_scenario(args.example)
    if scenario is None:
        return 2
    port = _resolve_port(args.port)
    if port is None:
        return 2
    try:
        visualize_task(
            scenario.build,
            host=args.host,
            port=port,
            assets_dir=args.assets_dir,
            log_level=args.log_level,
        )
    except ServerStartupError as exc:
        print(f"topflow: {exc}", file=sys.stderr)
        return 1
    return 0


def _cmd_script(args: argparse.Namespace) -> int:
    scenario = _resolve_scenario(args.example)
    if scenario is None:
        return 2
    try:
        with open(args.inputs, "r", encoding="utf-8") as fh:
            inputs = json.load(fh)
    except OSError as exc:
        return _usage_error(f"cannot read inputs file: {exc}")
    except json.JSONDecodeError as exc:
        return _usage_error(f"inputs file is not valid JSON: {exc}")
    if not isinstance(inputs, list):
        return _usage_error("inputs file must hold a JSON array of concrete inputs")
    try:
        description = replay(scenario.build, inputs)
    except ReplayError as exc:
        print(f"topflow: step {exc.step}: {exc.code}: {exc.detail}", file=sys.stderr)
        return 1
    print(json.dumps(description))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topflow",
        description="Serve or replay the built-in example workflows.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="print the available example names").set_defaults(
        func=_cmd_list
    )

    serve = sub.add_parser("serve", help="serve an example over HTTP")
    serve.add_argument("--example", required=True, help="scenario name (see `list`)")
    serve.add_argument(
        "--port",
        type=int,
        default=None,
        help=f"listen port (default: $PORT or {DEFAULT_PORT}; 0 picks a free port)",
    )
    serve.add_argument("--host", default=DEFAULT_HOST, help=f"bind host (default {DEFAULT_HOST})")
    serve.add_argument(
        "--assets-dir",
        default=None,
        help="directory holding the built web UI (index.html and assets)",
    )
    serve.add_argument("--log-level", default="info", help="uvicorn log level")
    serve.set_defaults(func=_cmd_serve)

    script = sub.add_parser("script", help="replay a JSON input script headlessly")
    script.add_argument("--example", required=True, help="scenario name (see `list`)")
    script.add_argument(
        "--inputs", required=True, help="path to a JSON array of concrete inputs"
    )
    script.set_defaults(func=_cmd_script)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
