import pytest

from lodstory.gateway import EndpointRef
from lodstory.testing import MockSparqlServer, build_bells_graph, build_organs_graph

_criteria_results: dict[str, bool] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(name): acceptance criterion this test implements"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    name = marker.args[0]
    if report.when == "call":
        _criteria_results[name] = _criteria_results.get(name, True) and report.passed
    elif report.failed:  # setup/teardown error
        _criteria_results[name] = False


def pytest_terminal_summary(terminalreporter):
    if not _criteria_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, ok in _criteria_results.items():
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}")


@pytest.fixture(scope="session")
def bells_graph():
    return build_bells_graph()


@pytest.fixture(scope="session")
def bells_server(bells_graph):
    with MockSparqlServer(bells_graph) as server:
        yield server


@pytest.fixture(scope="session")
def organs_server():
    with MockSparqlServer(build_organs_graph()) as server:
        yield server


@pytest.fixture(scope="session")
def bells_endpoint(bells_server):
    return EndpointRef(url=bells_server.url)
