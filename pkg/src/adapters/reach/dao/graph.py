from abc import ABC, abstractmethod
from typing import Sequence
import logging

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components


class AbstractComponentFinder(ABC):
    @abstractmethod
    def strong_components(self, nodes: int, edges: Sequence[tuple[int, int]]) -> list[int]:
        """
        Labels strongly connected components of a directed graph.
        :param nodes: number of nodes, numbered 0..nodes-1
        :param edges: directed (source, target) pairs
        :return: component label per node
        """
        raise NotImplementedError()


class ScipyComponentFinder(AbstractComponentFinder):
    def __init__(self, logger: logging.Logger | None = None):
        self._logger = logger or logging.getLogger(__name__)

    def strong_components(self, nodes, edges) -> list[int]:
        if nodes == 0:
            return []
        if edges:
            sources, targets = np.asarray(edges, dtype=np.int64).T
        else:
            sources = targets = np.zeros(0, dtype=np.int64)
        graph = csr_matrix(
            (np.ones(len(sources), dtype=np.int8), (sources, targets)),
            shape=(nodes, nodes)
        )
        count, labels = connected_components(graph, directed=True, connection="strong")
        self._logger.debug("Strong components computed", extra={"nodes": nodes, "components": int(count)})
        return labels.tolist()
