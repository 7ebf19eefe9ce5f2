import json
from pathlib import Path

import numpy as np
import pytest

import tads

FIXTURES = Path(__file__).parent / "fixtures"


def load_network(name: str) -> tads.Network:
    return tads.parse_network((FIXTURES / name).read_text())


def random_network(rng: np.random.Generator, n_in: int, hidden: list[int]) -> tads.Network:
    """A dense ReLU network with the given hidden widths (ReLU after every
    affine layer except the last)."""
    steps: list = []
    cur = n_in
    for li, width in enumerate(hidden):
        W = rng.uniform(-2.0, 2.0, (width, cur))
        b = rng.uniform(-1.0, 1.0, width)
        steps.append(tads.AffineStep(tads.AffineFunction(W, b)))
        if li != len(hidden) - 1:
            for i in range(1, width + 1):
                steps.append(tads.PartialReluStep(width, i))
        cur = width
    return tads.Network(tuple(steps), n_in, cur, "random")


def random_tads(rng: np.random.Generator, n_in: int = 2, out: int = 1) -> tads.Tads:
    """A small random structure over R^n_in obtained by symbolic execution."""
    width = int(rng.integers(2, 4))
    net = random_network(rng, n_in, [width, out])
    return tads.net_to_tads(net)


@pytest.fixture(scope="session")
def n_star() -> tads.Network:
    return load_network("n_star.json")


@pytest.fixture(scope="session")
def trained_a() -> tads.Network:
    return load_network("xor_trained_a.json")


@pytest.fixture(scope="session")
def trained_b() -> tads.Network:
    return load_network("xor_trained_b.json")


@pytest.fixture(scope="session")
def t_star(n_star) -> tads.Tads:
    return tads.net_to_tads(n_star)


@pytest.fixture(scope="session")
def t_a(trained_a) -> tads.Tads:
    return tads.net_to_tads(trained_a)


@pytest.fixture(scope="session")
def t_b(trained_b) -> tads.Tads:
    return tads.net_to_tads(trained_b)
