from abc import ABC, abstractmethod
from dataclasses import dataclass
import logging

import numpy as np

from src.adapters.network.dto import ReactionNetwork


@dataclass(frozen=True)
class CompiledNetwork:
    """Float rates, reactant matrix and jump vectors of a network, ready for sampling."""
    rates: np.ndarray       # (m,)
    reactants: np.ndarray   # (m, d)
    vectors: np.ndarray     # (m, d)
    depth: int              # largest reactant coefficient

    @property
    def size(self) -> int:
        return len(self.rates)


class AbstractSimulator(ABC):
    @abstractmethod
    def compile(self, network: ReactionNetwork) -> CompiledNetwork:
        raise NotImplementedError()

    @abstractmethod
    def propensities(self, compiled: CompiledNetwork, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError()

    @abstractmethod
    def step(self, compiled: CompiledNetwork, x: np.ndarray, rng: np.random.Generator) -> tuple[float, int] | None:
        """
        Samples one event at state x.
        :return: (holding time, reaction index), or None when no reaction is enabled
        """
        raise NotImplementedError()


class GillespieDirectSimulator(AbstractSimulator):
    def __init__(self, logger: logging.Logger | None = None):
        self._logger = logger or logging.getLogger(__name__)

    def compile(self, network):
        reactants = np.array([r.reactant for r in network.reactions], dtype=np.int64).reshape(-1, network.dimension)
        products = np.array([r.product for r in network.reactions], dtype=np.int64).reshape(-1, network.dimension)
        compiled = CompiledNetwork(
            rates=np.array([float(r.rate) for r in network.reactions], dtype=np.float64),
            reactants=reactants,
            vectors=products - reactants,
            depth=int(reactants.max()) if reactants.size else 0
        )
        self._logger.debug("Network compiled for sampling", extra={"reactions": compiled.size})
        return compiled

    def propensities(self, compiled, x):
        a = compiled.rates.copy()
        x = x.astype(np.float64)
        # falling factorial x_j (x_j - 1) ... (x_j - y_j + 1), zero once x_j < y_j
        for k in range(compiled.depth):
            a *= np.prod(np.where(compiled.reactants > k, x - k, 1.0), axis=1)
        return np.maximum(a, 0.0)

    def step(self, compiled, x, rng):
        a = self.propensities(compiled, x)
        total = a.sum()
        if total <= 0.0:
            return None
        dt = rng.exponential(1.0 / total)
        index = int(np.searchsorted(np.cumsum(a), rng.random() * total, side="right"))
        return dt, min(index, compiled.size - 1)
