import pytest

_results = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion; the outcome is taken from the test result."""
    entries = request.config.stash.setdefault(_results, [])
    entry = {"label": None, "detail": "", "nodeid": request.node.nodeid}
    entries.append(entry)

    def record(label, detail=""):
        entry["label"] = label
        entry["detail"] = detail

    return record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call":
        for entry in item.config.stash.get(_results, []):
            if entry["nodeid"] == item.nodeid:
                entry["passed"] = report.passed


def pytest_terminal_summary(terminalreporter, config):
    entries = [e for e in config.stash.get(_results, []) if e["label"]]
    if not entries:
        return
    terminalreporter.section("acceptance criteria")
    for e in entries:
        status = "PASS" if e.get("passed") else "FAIL"
        terminalreporter.write_line(f"[{status}] {e['label']}  {e['detail']}".rstrip())
