import pytest

from multipolar.symcore import RingContext

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict = {}


@pytest.fixture
def R2():
    return RingContext(("x", "y"), order="local_degrevlex")


@pytest.fixture
def R3():
    return RingContext(("x", "y", "z"), order="local_degrevlex")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
