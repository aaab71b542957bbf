from pathlib import Path

import pytest

from tusolve.cli import load_game

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def base_game():
    return load_game(FIXTURES / "base_game.json")


@pytest.fixture(scope="session")
def rounded_family():
    return {f"v{k}": load_game(FIXTURES / f"rounded_family_v{k}.json") for k in range(1, 12)}


@pytest.fixture(scope="session")
def rounded_hull():
    return load_game(FIXTURES / "rounded_hull_game.json")


@pytest.fixture(scope="session")
def segment_game():
    return load_game(FIXTURES / "segment_game.json")
