import os
import re
import sys

sys.path.insert(0, os.path.dirname(__file__))

_CRITERION = re.compile(r"test_acceptance\.py::test_c(\d\d)_(\w+)")
_results: dict[int, list] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or report.outcome == "failed":
        entry = _results.setdefault(int(m.group(1)), [m.group(2), True])
        entry[1] = entry[1] and report.outcome == "passed"


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        name, ok = _results[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {name}")
