import time

import pytest

from kahler_spacetime.catalog import BUILTIN_NAMES, builtin

_ACCEPTANCE = {}


@pytest.fixture(scope="session")
def catalog():
    return {name: builtin(name) for name in BUILTIN_NAMES}


@pytest.fixture(scope="session")
def flrw_linear():
    return builtin("flrw", law="linear")


@pytest.fixture
def acceptance():
    """Record one acceptance criterion: ``acceptance(n, ok, detail, runtime_limit=None)``.

    A ``runtime_limit`` (seconds) is checked against the whole pytest session
    when the summary is printed.
    """
    def record(number, ok, detail, runtime_limit=None):
        _ACCEPTANCE[number] = (bool(ok), detail, runtime_limit)
    return record


def pytest_sessionstart(session):
    session.config._acceptance_start = time.perf_counter()


def _acceptance_lines(config):
    elapsed = time.perf_counter() - config._acceptance_start
    lines, all_ok = [], True
    for number in sorted(_ACCEPTANCE):
        ok, detail, limit = _ACCEPTANCE[number]
        if limit is not None:
            ok = ok and elapsed < limit
            detail += f"; test session {elapsed:.1f} s (limit {limit:g} s)"
        all_ok &= ok
        lines.append(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    return lines, all_ok


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    lines, _ = _acceptance_lines(config)
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)


def pytest_sessionfinish(session, exitstatus):
    if _ACCEPTANCE and exitstatus == 0:
        _, all_ok = _acceptance_lines(session.config)
        if not all_ok:
            session.exitstatus = 1
