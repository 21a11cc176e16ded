import logging
import random
from fractions import Fraction
from pathlib import Path

import pytest
from dishka import make_container, Scope

from src.providers import AppProvider, AnalysisSettings
from src.adapters.network.dao import AbstractNetworkCodec
from src.adapters.network.dto import ReactionNetwork, Reaction
from src.adapters.onedim.service import ProfileService

CORPUS = Path(__file__).resolve().parents[1] / "corpus"


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exhaustive window checks, deselect with -m 'not slow'")


@pytest.fixture(autouse=True)
def setup_logging():
    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s - %(levelname)s - %(name)s - %(message)s",
        force=True,
        style="%"
    )


@pytest.fixture
def container():
    container = make_container(
        AppProvider(scope=Scope.APP, logger=logging.getLogger("tests"), settings=AnalysisSettings())
    )
    try:
        yield container
    finally:
        container.close()


@pytest.fixture
def corpus(container):
    """corpus("three_cycle", k1=1, k2=1, k3=1) loads corpus/three_cycle.srn with the given rates."""
    codec = container.get(AbstractNetworkCodec)

    def load(name: str, **rates):
        return codec.parse_file(CORPUS / f"{name}.srn", rates)

    return load


@pytest.fixture
def parse(container):
    codec = container.get(AbstractNetworkCodec)
    return lambda text, **rates: codec.parse(text, rates)


DIRECTIONS = {
    1: [(1,), (2,)],
    2: [(1, 0), (1, 1), (1, 2), (2, 1)],
    3: [(1, 0, 0), (1, 1, 0), (1, 0, 1), (1, 1, 1), (1, 2, 1), (2, 1, 0)],
}


@pytest.fixture
def one_dimensional_networks(container):
    """
    one_dimensional_networks(seed, count) draws networks with d <= 3 species and at most 8 reactions,
    every jump a multiple of one non-negative direction, kept only when H2-H4 hold.
    Yields (network, profile, c) with c at 0 on the support and 3 elsewhere, so every catalyst is present.
    """
    profiles = container.get(ProfileService)

    def draw(seed: int, count: int):
        rng = random.Random(seed)
        drawn = 0
        while drawn < count:
            d = rng.randint(1, 3)
            direction = rng.choice(DIRECTIONS[d])
            pairs = set()
            for _ in range(rng.randint(2, 8)):
                reactant = tuple(rng.randint(0, 3) for _ in range(d))
                product = tuple(a + rng.choice((-2, -1, 1, 2)) * w for a, w in zip(reactant, direction))
                if min(product) >= 0:
                    pairs.add((reactant, product))
            if not any(p[0] > r[0] for r, p in pairs) or not any(p[0] < r[0] for r, p in pairs):
                continue
            if any(all(r[j] == p[j] == 0 for r, p in pairs) for j in range(d)):
                continue
            network = ReactionNetwork(
                species=tuple(f"S{j + 1}" for j in range(d)),
                reactions=tuple(
                    Reaction(reactant=r, product=p, rate=Fraction(rng.randint(1, 9), rng.randint(1, 3)))
                    for r, p in sorted(pairs)
                )
            )
            profile = profiles.profile(network)
            if not (profile.h2_ok and profile.h3_ok and profile.h4_ok):
                continue
            support = set(profile.direction.support)
            c = tuple(0 if j in support else 3 for j in range(d))
            drawn += 1
            yield network, profile, c

    return draw
