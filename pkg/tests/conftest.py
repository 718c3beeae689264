import time
from contextlib import contextmanager

import pytest

_ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Context manager recording one acceptance criterion with its runtime budget."""

    @contextmanager
    def run(number, title, budget):
        detail = {}
        status = "FAIL"
        start = time.perf_counter()
        try:
            yield detail
            elapsed = time.perf_counter() - start
            assert elapsed < budget, f"runtime {elapsed:.1f} s exceeds the {budget} s budget"
            status = "PASS"
        finally:
            elapsed = time.perf_counter() - start
            extra = "; ".join(f"{k}={v}" for k, v in detail.items())
            line = f"{status} {number:>2}. {title} [{elapsed:.2f} s / {budget} s] {extra}".rstrip()
            _ACCEPTANCE.append((number, line))
            print(line)

    return run


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for _, line in sorted(_ACCEPTANCE):
        terminalreporter.write_line(line)
