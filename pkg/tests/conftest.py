"""Shared test plumbing: the acceptance gate registry.

Acceptance tests append one line per gate; the terminal summary prints
them as a compact scoreboard after the normal pytest output.
"""

GATE_LINES: list[str] = []


def record_gate(number: int, name: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] gate {number:02d} {name}: {detail}"
    GATE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not GATE_LINES:
        return
    terminalreporter.section("acceptance gates")
    for line in GATE_LINES:
        terminalreporter.write_line(line)
