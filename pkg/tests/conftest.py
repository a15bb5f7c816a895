import pytest

from thompson_moonshine import thompson as th

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def table():
    return th.load_character_table()


@pytest.fixture(scope="session")
def classes():
    return th.load_classes()


@pytest.fixture(scope="session")
def class_map(classes):
    return {c.name: c for c in classes}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
