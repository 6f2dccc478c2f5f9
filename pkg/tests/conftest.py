import importlib.util

import pytest

from mocakit import _pykernels, kernels

HAVE_EXT = importlib.util.find_spec("mocakit._ckernels") is not None

BACKENDS = ["cython", "python"] if HAVE_EXT else ["python"]


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per kernel backend."""
    if request.param == "python":
        monkeypatch.setattr(kernels, "_impl", _pykernels)
    else:
        from mocakit import _ckernels
        monkeypatch.setattr(kernels, "_impl", _ckernels)
    return request.param


def pytest_terminal_summary(terminalreporter):
    from tests import acceptance_log
    if acceptance_log.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.lines():
            terminalreporter.write_line(line)
