import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))  # make `oracles` importable

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


@pytest.fixture(scope="session")
def data_dir() -> str:
    return DATA_DIR


@pytest.fixture(scope="session")
def toysuite_dir() -> str:
    return os.path.join(DATA_DIR, "toysuite")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            number = name.split("_")[2]
            label = " ".join(name.split("_")[3:])
            status = "PASS" if outcome == "passed" else "FAIL"
            lines.append((int(number), "ACCEPTANCE %2d %s  %s" % (int(number), status, label)))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
