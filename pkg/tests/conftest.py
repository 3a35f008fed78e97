import functools
import random

import pytest

import prefgame
import prefgame.cli
import prefgame.optimize

# Every analyze() call made anywhere in the suite is recorded so the
# PoS <= 2 criterion can be judged over all of them at the end.
ANALYZED: list = []
RESULTS: dict = {}

_analyze = prefgame.optimize.analyze


@functools.wraps(_analyze)
def _recording_analyze(inst, *args, **kwargs):
    report = _analyze(inst, *args, **kwargs)
    ANALYZED.append(report.pos)
    return report


for _mod in (prefgame.optimize, prefgame, prefgame.cli):
    _mod.analyze = _recording_analyze


@pytest.fixture
def rng():
    return random.Random(20240617)


def pytest_sessionfinish(session, exitstatus):
    if not ANALYZED:
        return
    bad = [p for p in ANALYZED if not p <= 2]
    RESULTS[2] = (not bad, f"{len(ANALYZED)} analyze() calls across the suite, max pos "
                           f"{max(ANALYZED)}")
    if bad:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(RESULTS):
        ok, detail = RESULTS[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
