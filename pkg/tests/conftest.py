import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo",
    deadline=None,
    max_examples=60,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

_ACCEPTANCE: list[str] = []


@pytest.fixture
def record():
    def _record(num: int, ok: bool, detail: str = ""):
        line = f"criterion {num}: {'PASS' if ok else 'FAIL'}" + (f"  {detail}" if detail else "")
        _ACCEPTANCE.append(line)
        print(line)
        return ok

    return _record


@pytest.fixture
def rng(request):
    return np.random.default_rng(abs(hash(request.node.name)) % (1 << 32))


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
