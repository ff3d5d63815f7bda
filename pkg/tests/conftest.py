import time

import pytest

ACCEPTANCE = []


class Recorder:
    """Collects one pass/fail line per acceptance criterion."""

    def __init__(self, number, limit):
        self.number = number
        self.limit = limit
        self.start = time.perf_counter()

    def finish(self, passed, detail):
        elapsed = time.perf_counter() - self.start
        in_time = self.limit is None or elapsed <= self.limit
        ok = bool(passed) and in_time
        budget = f" / {self.limit:g} s" if self.limit is not None else ""
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {self.number}: {detail}; {elapsed:.2f} s{budget}"
        ACCEPTANCE.append((self.number, line))
        print(line)
        return ok


@pytest.fixture
def criterion():
    return Recorder


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE):
        terminalreporter.write_line(line)
