import os
import re

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "rmtlab",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "rmtlab"))

_CRITERIA: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        detail = dict(report.user_properties).get("detail", "")
        _CRITERIA[name] = ("PASS" if report.passed else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")

    def order(name):
        m = re.search(r"criterion_(\d+)", name)
        return int(m.group(1)) if m else 99

    for name in sorted(_CRITERIA, key=order):
        status, detail = _CRITERIA[name]
        terminalreporter.write_line(f"{status}  {name}  {detail}")


@pytest.fixture
def detail(record_property):
    """Attach a one-line measurement to the acceptance summary."""

    def _set(text: str):
        record_property("detail", text)

    return _set
