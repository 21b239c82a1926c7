import pathlib

import pytest

FIXTURES = pathlib.Path(__file__).parent / "fixtures"

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion covered by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            n, text = m.args
            _criteria.setdefault(n, {"text": text, "outcomes": []})
            item.user_properties.append(("criterion", n))


def pytest_runtest_logreport(report):
    for key, n in report.user_properties:
        if key != "criterion":
            continue
        if report.when == "call" or (report.when == "setup" and not report.passed):
            _criteria[n]["outcomes"].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        outs = _criteria[n]["outcomes"]
        verdict = "PASS" if outs and all(outs) else ("NOT RUN" if not outs else "FAIL")
        terminalreporter.write_line(f"criterion {n:2d}: {verdict}  {_criteria[n]['text']}")


@pytest.fixture
def fixtures_dir():
    return FIXTURES
