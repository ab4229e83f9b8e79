"""Shared pytest config: prints one PASS/FAIL line per acceptance criterion."""

from __future__ import annotations

ACCEPTANCE_MODULE = "test_acceptance"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = []
    for outcome, flag in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if ACCEPTANCE_MODULE not in nodeid:
                continue
            if getattr(report, "when", "call") not in ("call", "setup"):
                continue
            name = nodeid.split("::")[-1]
            lines.append((name, flag))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for name, flag in lines:
        terminalreporter.write_line(f"{flag}: {name}")
