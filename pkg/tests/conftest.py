import pytest
from hypothesis import settings

# numba compiles on first call, so per-example deadlines are meaningless
settings.register_profile("fraccalc", deadline=None, max_examples=60)
settings.load_profile("fraccalc")

# acceptance results collected by tests/test_acceptance.py, printed at the end
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture(params=["numba", "numpy"])
def impl(request):
    from fraccalc import kernels

    return kernels.numba_impl if request.param == "numba" else kernels.numpy_impl
