from __future__ import annotations

import json
import os
import sys

import pytest
from hypothesis import HealthCheck, settings

HERE = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, HERE)

settings.register_profile("default", deadline=None, derandomize=True, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def frozen():
    with open(os.path.join(HERE, "oracles", "frozen.json")) as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def bases_path():
    return os.path.join(HERE, "fixtures", "mw_bases.json")


@pytest.fixture
def ones_ledger_file(tmp_path):
    from ellbound.ledger import ConstantsLedger

    path = tmp_path / "ones.toml"
    ConstantsLedger.ones().write(path)
    return str(path)


# acceptance criterion outcomes, reported once at the end of the session
_CRITERIA: dict[int, list] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is None:
        return
    n, title = m.args
    entry = _CRITERIA.setdefault(n, [title, "PASS"])
    if rep.failed or (rep.when == "call" and rep.skipped):
        entry[1] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, status = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:>2}: {status}  {title}")
