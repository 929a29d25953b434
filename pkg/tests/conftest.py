"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""

import pytest

_RESULTS: dict[str, list] = {}
_TITLES: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(code, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    code, title = marker.args
    _TITLES[code] = title
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _RESULTS.setdefault(code, []).append((item.name, rep.passed, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for code in sorted(_RESULTS, key=lambda c: int(c[2:])):
        runs = _RESULTS[code]
        ok = all(passed for _, passed, _ in runs)
        secs = sum(d for _, _, d in runs)
        failed = [name for name, passed, _ in runs if not passed]
        line = f"{code} {'PASS' if ok else 'FAIL'}  {_TITLES[code]}  ({len(runs)} checks, {secs:.2f}s)"
        if failed:
            line += "  failed: " + ", ".join(failed)
        terminalreporter.write_line(line)
