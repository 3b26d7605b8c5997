"""Shared fixtures and the --runslow gate."""

from __future__ import annotations

from pathlib import Path

import pytest

from alclearn.concepts import Signature
from alclearn.config_manager import ConfigManager
from alclearn.datasets import synthetic_family_kb
from alclearn.heuristics import LearningProblem
from alclearn.knowledge import KnowledgeBase, kb_from_lines

TINY_KB_LINES = [
    "type a Male",
    "type b Female",
    "role a hasChild c",
    "role b hasChild c",
]


def pytest_addoption(parser: pytest.Parser) -> None:
    parser.addoption("--runslow", action="store_true", default=False, help="Run the long acceptance tests.")


def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line("markers", "slow: long-running acceptance test, needs --runslow")


def pytest_collection_modifyitems(config: pytest.Config, items: list[pytest.Item]) -> None:
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(name="tiny_kb")
def tiny_kb_fixture() -> KnowledgeBase:
    """Male={a}, Female={b}, hasChild={(a,c),(b,c)}."""
    return kb_from_lines(TINY_KB_LINES, source="<tiny>")


@pytest.fixture(name="tiny_lp")
def tiny_lp_fixture(tiny_kb: KnowledgeBase) -> LearningProblem:
    """E+={a,b}, E-={c} over the tiny KB."""
    return LearningProblem(
        positives=tiny_kb.individual_set(["a", "b"]),
        negatives=tiny_kb.individual_set(["c"]),
        lp_id="tiny",
    )


@pytest.fixture(name="family_kb", scope="session")
def family_kb_fixture() -> KnowledgeBase:
    """The bundled synthetic family KB, built once per session."""
    return synthetic_family_kb(seed=0)


@pytest.fixture(name="sig_ab")
def sig_ab_fixture() -> Signature:
    """Signature ({A, B}, {r})."""
    return Signature.from_names(["A", "B"], ["r"])


@pytest.fixture(name="config_manager")
def config_manager_fixture(tmp_path: Path) -> ConfigManager:
    """Config manager writing its defaults into a temporary directory."""
    return ConfigManager(tmp_path / "runtime_config.json")
