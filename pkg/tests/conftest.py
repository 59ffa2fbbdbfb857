import time

import pytest

from qrv.quiver import Algebra, Quiver

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title, budget): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    start = time.perf_counter()
    yield
    item.user_properties.append(("elapsed", time.perf_counter() - start))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title, budget = marker.args
    elapsed = dict(item.user_properties).get("elapsed", 0.0)
    entry = _CRITERIA.setdefault(number, {"title": title, "budget": budget, "ok": True,
                                          "elapsed": 0.0, "parts": 0})
    entry["parts"] += 1
    entry["elapsed"] += elapsed
    entry["ok"] = entry["ok"] and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        e = _CRITERIA[number]
        in_time = e["elapsed"] <= e["budget"]
        status = "PASS" if e["ok"] and in_time else "FAIL"
        note = "" if in_time else f" (over the {e['budget']:g} s budget)"
        terminalreporter.write_line(
            f"criterion {number}: {status}  {e['title']}  [{e['elapsed']:.2f} s, "
            f"{e['parts']} check(s)]{note}")


@pytest.fixture
def loop_quiver():
    return Quiver.from_arrows(["1"], [("c", "1", "1")])


@pytest.fixture
def loop_algebra(loop_quiver):
    return Algebra.radical_square_zero(loop_quiver)


def zigzag_quiver() -> Quiver:
    """Four vertices in a line with loops at the two middle ones."""
    return Quiver.from_arrows(["1", "2", "3", "4"], [
        ("A1", "1", "2"), ("B1", "2", "2"), ("A2", "2", "3"), ("B2", "3", "3"), ("A3", "3", "4"),
    ])
