import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

_acceptance_results: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        _acceptance_results[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    from test_acceptance import CRITERIA

    terminalreporter.write_sep("=", "acceptance criteria")
    for test_name, label in CRITERIA.items():
        outcome = _acceptance_results.get(test_name)
        if outcome is not None:
            terminalreporter.write_line(f"{outcome}  {label}")
