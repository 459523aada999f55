import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

ACCEPTANCE: dict[int, tuple[str, bool, float, float, str]] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion: call with (number, title, limit_seconds)."""
    state = {}

    def start(number: int, title: str, limit: float):
        state.update(number=number, title=title, limit=limit, t0=time.perf_counter())

    yield start
    if not state:
        return
    elapsed = time.perf_counter() - state["t0"]
    rep = getattr(request.node, "rep_call", None)
    passed = rep is not None and rep.passed and elapsed < state["limit"]
    note = "" if rep is None or rep.passed else "assertion failed"
    ACCEPTANCE[state["number"]] = (state["title"], passed, elapsed, state["limit"], note)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed, elapsed, limit, note = ACCEPTANCE[number]
        status = "PASS" if passed else "FAIL"
        extra = f" ({note})" if note else ""
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {elapsed:7.2f}s / {limit:.0f}s  {title}{extra}")
