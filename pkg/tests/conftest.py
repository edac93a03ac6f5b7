from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from vixjumps.tables import ERAKER_MODEL, FN_MODEL, KOU_MODEL

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# criterion number -> list of (ok, detail); filled by tests/test_acceptance.py
ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


@pytest.fixture
def eraker():
    return ERAKER_MODEL


@pytest.fixture
def kou():
    return KOU_MODEL


@pytest.fixture
def fn():
    return FN_MODEL


@pytest.fixture(params=["eraker", "kou", "fn"])
def any_model(request):
    return {"eraker": ERAKER_MODEL, "kou": KOU_MODEL, "fn": FN_MODEL}[request.param]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[n]
        ok = all(c for c, _ in checks)
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}")
        for c, detail in checks:
            terminalreporter.write_line(f"    [{'ok' if c else 'FAIL'}] {detail}")
