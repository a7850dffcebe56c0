"""
Shared fixtures and graph builders for the test suite.
"""

from typing import List, Optional, Tuple

import numpy as np
import pytest

from src.graph import CoauthorGraph, build_graph, stochastic_operator
from src.models import CitationProfile, RawEdge


def edges(*triples) -> List[RawEdge]:
    """RawEdge records from (a, b) or (a, b, weight) tuples."""
    return [RawEdge(a=t[0], b=t[1], weight=t[2] if len(t) == 3 else 1.0) for t in triples]


def random_connected_graph(rng: np.random.Generator, n: int,
                           extra_edges: Optional[int] = None) -> Tuple[CoauthorGraph, CitationProfile]:
    """
    Random spanning tree plus extra random edges, with positive random weights
    and citation counts that are positive for at least one author.
    """
    names = [f"A{i:03d}" for i in range(n)]
    records = []
    for i in range(1, n):
        j = int(rng.integers(0, i))
        records.append(RawEdge(a=names[i], b=names[j], weight=float(rng.uniform(0.5, 5.0))))
    if extra_edges is None:
        extra_edges = n
    for _ in range(extra_edges):
        i, j = rng.integers(0, n, size=2)
        if i != j:
            records.append(RawEdge(a=names[int(i)], b=names[int(j)], weight=float(rng.integers(1, 6))))
    totals = {name: int(c) for name, c in zip(names, rng.integers(0, 200, size=n))}
    totals[names[0]] += 1
    return build_graph(records), CitationProfile(totals=totals)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def path_graph():
    """A - B - C with unit weights."""
    return build_graph(edges(("A", "B"), ("B", "C")))


@pytest.fixture
def path_operator(path_graph):
    return stochastic_operator(path_graph, "weighted")


@pytest.fixture
def citations_abc():
    return CitationProfile(totals={"A": 10, "B": 5, "C": 5})


@pytest.fixture
def dataset_dir(tmp_path):
    """Small hand-written dataset with two components and one malformed line."""
    (tmp_path / "edges.tsv").write_text(
        "# authorA\tauthorB\tweight\n"
        "Smith, J\tJones, K\t3\n"
        "Jones, K\tLee, M\t1\n"
        "Lee, M\tSmith, J\t2\n"
        "Lee, M\tPark, S\n"
        "Park, S\tKim, H\t1\n"
        "Kim, H\tSmith, J\t4\n"
        "not a valid line\n"
        "Ito, T\tSato, Y\t2\n",
        encoding="utf-8",
    )
    (tmp_path / "citations.tsv").write_text(
        "Smith, J\t120\t50,40,20,10\n"
        "Jones, K\t80\t30,30,20\n"
        "Lee, M\t45\t20,15,10\n"
        "Park, S\t12\t6,6\n"
        "Kim, H\t30\t10,10,10\n"
        "Ito, T\t7\n",
        encoding="utf-8",
    )
    (tmp_path / "awards.txt").write_text("Smith, J\nLee, M\nOutsider, Z\n", encoding="utf-8")
    (tmp_path / "pc.tsv").write_text("Smith, J\t3\nKim, H\t1\n", encoding="utf-8")
    return tmp_path
