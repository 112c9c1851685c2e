from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

import pytest

CRITERIA = {}


@pytest.fixture
def criterion(request):
    """Record a pass/fail line for an acceptance criterion; the line is printed in the terminal summary."""
    def record(n, ok, seconds, limit=None):
        budget = f" (limit {limit} s)" if limit is not None else ""
        CRITERIA[n] = f"criterion {n}: {'pass' if ok else 'fail'} in {seconds:.2f} s{budget}"
        print(CRITERIA[n])
    return record


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[n])
