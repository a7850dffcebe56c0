"""
Coauthorship graph construction, component extraction and the
column-stochastic transition operator.
"""

import logging
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from src.errors import DanglingNode, EmptyGraph, InvalidAuthorId, InvalidWeight
from src.models import AuthorId, ComponentSummary, Edge, NormalizationMode, RawEdge

logger = logging.getLogger(__name__)


class CoauthorGraph:
    """Undirected weighted simple graph of authors. Immutable once built."""

    def __init__(self, nodes: Sequence[AuthorId], weights: Mapping[Tuple[AuthorId, AuthorId], float]):
        self._nodes: Tuple[AuthorId, ...] = tuple(nodes)
        self._index = MappingProxyType({node: i for i, node in enumerate(self._nodes)})
        adjacency: Dict[AuthorId, Dict[AuthorId, float]] = {node: {} for node in self._nodes}
        for (a, b), w in weights.items():
            adjacency[a][b] = w
            adjacency[b][a] = w
        self._adjacency = MappingProxyType(
            {node: MappingProxyType(nbrs) for node, nbrs in adjacency.items()}
        )
        self._edge_count = len(weights)

    @property
    def nodes(self) -> Tuple[AuthorId, ...]:
        return self._nodes

    def __len__(self) -> int:
        return len(self._nodes)

    def __contains__(self, author: object) -> bool:
        return author in self._index

    def index_of(self, author: AuthorId) -> int:
        return self._index[author]

    @property
    def number_of_edges(self) -> int:
        return self._edge_count

    def weight(self, a: AuthorId, b: AuthorId) -> float:
        return self._adjacency[a].get(b, 0.0)

    def neighbors(self, author: AuthorId) -> List[Tuple[AuthorId, float]]:
        return list(self._adjacency[author].items())

    def degree(self, author: AuthorId) -> int:
        return len(self._adjacency[author])

    def weighted_degree(self, author: AuthorId) -> float:
        return float(sum(self._adjacency[author].values()))

    def degree_distribution(self, weighted: bool = False) -> List[float]:
        if weighted:
            return [self.weighted_degree(n) for n in self._nodes]
        return [float(self.degree(n)) for n in self._nodes]

    def edges(self) -> List[Edge]:
        """Each undirected edge once, oriented by node order."""
        result = []
        for node in self._nodes:
            i = self._index[node]
            for nbr, w in self._adjacency[node].items():
                if self._index[nbr] > i:
                    result.append(Edge(a=node, b=nbr, weight=w))
        return result

    def subgraph(self, members: Iterable[AuthorId]) -> "CoauthorGraph":
        """Induced subgraph, keeping this graph's node order."""
        keep = set(members)
        nodes = [n for n in self._nodes if n in keep]
        weights = {}
        for node in nodes:
            for nbr, w in self._adjacency[node].items():
                if nbr in keep and self._index[nbr] > self._index[node]:
                    weights[(node, nbr)] = w
        return CoauthorGraph(nodes, weights)

    def adjacency_matrix(self, binary: bool = False) -> sp.csr_matrix:
        """Symmetric sparse adjacency matrix in node order."""
        n = len(self._nodes)
        rows, cols, data = [], [], []
        for node in self._nodes:
            i = self._index[node]
            for nbr, w in self._adjacency[node].items():
                rows.append(i)
                cols.append(self._index[nbr])
                data.append(1.0 if binary else w)
        return sp.csr_matrix((data, (rows, cols)), shape=(n, n), dtype=np.float64)

    def __repr__(self) -> str:
        return f"CoauthorGraph(nodes={len(self)}, edges={self.number_of_edges})"


class StochasticOperator:
    """Column-stochastic transition matrix M of a coauthorship graph."""

    def __init__(self, graph: CoauthorGraph, mode: NormalizationMode, matrix: sp.csc_matrix):
        self.graph = graph
        self.mode = mode
        self.matrix = matrix

    @property
    def nodes(self) -> Tuple[AuthorId, ...]:
        return self.graph.nodes

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Return M @ x without modifying x."""
        return self.matrix @ x

    def column_sums(self) -> np.ndarray:
        return np.asarray(self.matrix.sum(axis=0)).ravel()

    def column(self, author: AuthorId) -> Dict[AuthorId, float]:
        j = self.graph.index_of(author)
        col = self.matrix.getcol(j).tocoo()
        return {self.nodes[i]: float(v) for i, v in zip(col.row, col.data)}

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


def build_graph(records: Iterable[RawEdge]) -> CoauthorGraph:
    """
    Build an undirected weighted graph from raw coauthorship records.

    Duplicate unordered pairs are merged by summing weights and self-loops
    are dropped (their author still becomes a node).

    Args:
        records: Raw (a, b, weight) records

    Returns:
        The coauthorship graph with nodes in first-appearance order
    """
    records = list(records)
    if not records:
        raise EmptyGraph("No edge records supplied")

    nodes: Dict[AuthorId, None] = {}
    weights: Dict[Tuple[AuthorId, AuthorId], float] = {}
    self_loops = 0
    merged = 0

    for record in records:
        a, b = record.a.strip(), record.b.strip()
        if not a or not b:
            raise InvalidAuthorId(f"Empty author id in record {record!r}")
        if not record.weight > 0:
            raise InvalidWeight(record)
        nodes.setdefault(a)
        nodes.setdefault(b)
        if a == b:
            self_loops += 1
            continue
        key = (a, b) if (a, b) in weights or (b, a) not in weights else (b, a)
        if key in weights:
            merged += 1
        weights[key] = weights.get(key, 0.0) + float(record.weight)

    if self_loops:
        logger.info(f"Dropped {self_loops} self-loop records")
    if merged:
        logger.info(f"Merged {merged} duplicate coauthor pairs by summing weights")

    graph = CoauthorGraph(list(nodes), weights)
    logger.debug(f"Built {graph!r}")
    return graph


def components(graph: CoauthorGraph) -> List[CoauthorGraph]:
    """
    Split a graph into its connected components.

    Components are ordered by node count (largest first), ties broken by
    the lexicographically smallest author id.
    """
    if len(graph) == 0:
        return []
    _, labels = csgraph.connected_components(graph.adjacency_matrix(), directed=False)
    groups: List[List[AuthorId]] = [[] for _ in range(labels.max() + 1)]
    for node, label in zip(graph.nodes, labels):
        groups[label].append(node)
    groups.sort(key=lambda members: (-len(members), min(members)))
    return [graph.subgraph(members) for members in groups]


def largest_component(graph: CoauthorGraph) -> CoauthorGraph:
    if len(graph) == 0:
        raise EmptyGraph("Graph has no nodes")
    return components(graph)[0]


def component_summary(graph: CoauthorGraph) -> List[ComponentSummary]:
    return [
        ComponentSummary(
            index=i + 1,
            size=len(comp),
            edges=comp.number_of_edges,
            smallest_member=min(comp.nodes),
        )
        for i, comp in enumerate(components(graph))
    ]


def stochastic_operator(graph: CoauthorGraph, mode: NormalizationMode = "weighted") -> StochasticOperator:
    """
    Column-normalize the adjacency matrix of a graph.

    Weighted mode divides each column by the node's incident weight sum,
    unweighted mode divides the 0/1 adjacency by the neighbor count. A
    single-node graph yields the 1x1 zero operator.
    """
    if mode not in ("weighted", "unweighted"):
        raise ValueError(f"Unknown normalization mode: {mode}")
    if len(graph) == 0:
        raise EmptyGraph("Cannot build an operator over an empty graph")

    if len(graph) > 1:
        for node in graph.nodes:
            if graph.degree(node) == 0:
                raise DanglingNode(node)

    adjacency = graph.adjacency_matrix(binary=(mode == "unweighted")).tocsc()
    col_sums = np.asarray(adjacency.sum(axis=0)).ravel()
    inverse = np.zeros_like(col_sums)
    nonzero = col_sums > 0
    inverse[nonzero] = 1.0 / col_sums[nonzero]
    matrix = (adjacency @ sp.diags(inverse)).tocsc()
    return StochasticOperator(graph, mode, matrix)
