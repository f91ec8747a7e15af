"""Shared fixtures for statecover tests."""

from pathlib import Path

import pytest

from statecover.export import suite_to_json
from statecover.generator import enumerate_sequences
from statecover.machine import flatten
from statecover.models import Statechart, TestSuite
from statecover.parser import parse_statechart

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def atm_path() -> Path:
    return FIXTURES / "atm.scd"


@pytest.fixture
def hierarchical_path() -> Path:
    return FIXTURES / "hierarchical.scd"


@pytest.fixture
def atm_text(atm_path: Path) -> str:
    return atm_path.read_text(encoding="utf-8")


@pytest.fixture
def atm(atm_text: str) -> Statechart:
    return parse_statechart(atm_text, strict=True)


@pytest.fixture
def hierarchical(hierarchical_path: Path) -> Statechart:
    return parse_statechart(hierarchical_path.read_text(encoding="utf-8"), strict=True)


@pytest.fixture
def flat_player(hierarchical: Statechart) -> Statechart:
    return flatten(hierarchical)


@pytest.fixture
def atm_suite(atm: Statechart) -> TestSuite:
    """The 26 sequences of the ticket machine, tc1..tc26."""
    return enumerate_sequences(atm, 7)


@pytest.fixture
def single() -> Statechart:
    """One transition from the initial state straight to the final state."""
    return parse_statechart(
        "statechart Single\nevents go\nstate A initial\nstate B final\ntransition a: A -> B on go\n",
        strict=True,
    )


@pytest.fixture
def atm_suite_file(tmp_path: Path, atm_suite: TestSuite) -> Path:
    path = tmp_path / "suite.json"
    path.write_text(suite_to_json(atm_suite), encoding="utf-8")
    return path


@pytest.fixture
def nested() -> Statechart:
    """Two levels of nesting with a guarded inner handler shadowing an outer one."""
    return parse_statechart((FIXTURES / "nested.scd").read_text(encoding="utf-8"), strict=True)
