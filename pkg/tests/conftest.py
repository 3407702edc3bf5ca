import pytest


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])


@pytest.fixture
def f7():
    from ratcurves.field import parse_field

    return parse_field("p=7")
