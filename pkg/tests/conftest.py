import pathlib

import pytest

from mazekit.generate import GenConfig, generate_solved_maze, solve_shortest_path
from mazekit.rng import derive_seed
from mazekit.tokens import parse_maze_tokens

DATA_DIR = pathlib.Path(__file__).parent / "data"

GOLDEN_PATH = DATA_DIR / "example_maze_tokens.txt"


@pytest.fixture(scope="session")
def golden_text() -> str:
    return GOLDEN_PATH.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def example_maze(golden_text):
    """The worked 5x5 example: origin (2,1), target (4,2), 5-step solution."""
    return parse_maze_tokens(golden_text)


@pytest.fixture(scope="session")
def maze_corpus():
    """200 seeded solved 5x5 mazes with their shortest paths, shared across tests."""
    corpus = []
    for i in range(200):
        m = generate_solved_maze(GenConfig(seed=derive_seed(0xC0FFEE, i)))
        corpus.append((m, solve_shortest_path(m)))
    return corpus
