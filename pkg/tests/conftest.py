import re
import time
from collections import OrderedDict

import numpy as np
import pytest

_acceptance = OrderedDict()
_details = {}
_start = time.perf_counter()


@pytest.fixture
def rng():
    return np.random.default_rng(20211)


@pytest.fixture
def note(request):
    """Record a line to print under this criterion in the terminal summary."""
    m = re.search(r"test_criterion_(\d+)_", request.node.name)
    key = int(m.group(1)) if m else 0
    lines = _details.setdefault(key, [])
    lines.clear()
    return lines.append


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    m = re.search(r"test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = int(m.group(1))
    if report.when == "call" or report.failed:
        ok = _acceptance.get(key, (True, ""))[0] and report.passed
        label = _acceptance.get(key, (True, m.group(2).replace("_", " ")))[1]
        _acceptance[key] = (ok, label)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_acceptance):
        ok, label = _acceptance[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {key}: {label}")
        for line in _details.get(key, ()):
            terminalreporter.write_line(f"      {line}")
    elapsed = time.perf_counter() - _start
    verdict = "within" if elapsed < 300 else "OVER"
    terminalreporter.write_line(f"full suite runtime {elapsed:.1f} s ({verdict} the 300 s budget)")
