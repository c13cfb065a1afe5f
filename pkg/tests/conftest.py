import warnings

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def fixtures():
    from rigidpave import ingest

    return ingest.read_sections(), ingest.read_scenarios()


@pytest.fixture(scope="session")
def section_runs(fixtures):
    """k for every (moisture, bond) scenario of every fixture section."""
    from rigidpave import studies

    sections, scenarios = fixtures
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return {s.section_id: (s, studies.scenario_ks(s, scenarios)) for s in sections}


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
