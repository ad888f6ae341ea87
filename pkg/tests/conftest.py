import json
import sys
from functools import lru_cache
from pathlib import Path

import pytest

from crosscap import build_problem
from crosscap.cli import load_problem

DATA = Path(__file__).resolve().parents[1] / "src" / "crosscap" / "data"


def data_path(name: str) -> Path:
    return DATA / f"{name}.json"


@lru_cache(maxsize=None)
def problem_file(name: str):
    return load_problem(data_path(name))


@lru_cache(maxsize=None)
def crosscap_problem(name: str):
    """Cached CrossCapProblem for a bundled file (uses (omega, g) for immersions)."""
    return build_problem(problem_file(name).crosscap_map)


@pytest.fixture(scope="session")
def ex1():
    return crosscap_problem("example1")


@pytest.fixture(scope="session")
def ex2():
    return crosscap_problem("example2")


@pytest.fixture(scope="session")
def sphere():
    return crosscap_problem("sphere_immersion")


@pytest.fixture(scope="session")
def whitney3():
    return crosscap_problem("whitney3")


@pytest.fixture(scope="session")
def whitney5():
    return crosscap_problem("whitney5")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
