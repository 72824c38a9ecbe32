from functools import lru_cache

import pytest

from hilbcalc import load_model

BUILTINS = ("P2", "P1xP1", "K3like", "Abelianlike")


@lru_cache(maxsize=None)
def builtin(name):
    """One shared instance per model, so memo tables survive across tests."""
    return load_model(f"builtin:{name}")


@pytest.fixture
def P2():
    return builtin("P2")


@pytest.fixture
def P1xP1():
    return builtin("P1xP1")


@pytest.fixture
def abelian():
    return builtin("Abelianlike")


@pytest.fixture
def K3():
    return builtin("K3like")


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
