import pytest

from mdcavity import CavityModel

_ACCEPTANCE: list[str] = []


def record(line: str) -> None:
    """Store one acceptance verdict line for the end-of-run summary."""
    _ACCEPTANCE.append(line)
    print(line)


@pytest.fixture
def model():
    return CavityModel(omega_r=1.0)


@pytest.fixture(params=[0.1, 1.0, 2.0])
def models(request):
    return CavityModel(omega_r=request.param)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
