import time
from collections import OrderedDict

import pytest

_criteria = OrderedDict()


def _entry(item):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return None
    cid, title = mark.args
    return _criteria.setdefault(cid, {"title": title, "parts": [], "seconds": 0.0})


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    start = time.perf_counter()
    yield
    entry = _entry(item)
    if entry is not None:
        entry["seconds"] += time.perf_counter() - start


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    entry = _entry(item)
    if entry is None or report.when != "call" and not (report.when == "setup" and report.failed):
        return
    if hasattr(report, "wasxfail"):
        status = "xfail"
    else:
        status = report.outcome
    entry["parts"].append((item.name, status, getattr(report, "wasxfail", "")))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid, entry in _criteria.items():
        parts = entry["parts"]
        bad = [p for p in parts if p[1] != "passed"]
        verdict = "PASS" if parts and not bad else "FAIL"
        tr.write_line(f"criterion {cid}: {verdict}  {entry['title']}  "
                      f"({len(parts) - len(bad)}/{len(parts)} parts, {entry['seconds']:.1f} s)")
        for name, status, reason in bad:
            extra = f": {reason}" if reason else ""
            tr.write_line(f"    {name} {status}{extra}")
