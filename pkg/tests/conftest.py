import pytest

from sqpart import _kernels

ACCEPTANCE_LINES = []

BACKENDS = [k for k in (_kernels.NUMBA_KERNELS, _kernels.NUMPY_KERNELS) if k is not None]


@pytest.fixture(params=BACKENDS, ids=lambda k: k.name)
def kernels(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
