"""Collects acceptance-criterion outcomes and prints one line per criterion."""
import pytest

_OUTCOMES = {}


@pytest.fixture
def note(request):
    """Attach a one-line result summary to the current criterion."""
    def _note(text):
        request.node.user_properties.append(("detail", text))
    return _note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when not in ("setup", "call"):
        return
    if rep.when == "setup" and rep.passed:
        return
    number, title = marker.args
    details = [v for k, v in item.user_properties if k == "detail"]
    prev = _OUTCOMES.get(number)
    passed = rep.passed and (prev is None or prev[1])
    detail = "; ".join(([prev[2]] if prev and prev[2] else []) + details)
    _OUTCOMES[number] = (title, passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_OUTCOMES):
        title, passed, detail = _OUTCOMES[number]
        status = "PASS" if passed else "FAIL"
        line = f"criterion {number:>2} {status}  {title}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
