"""
Utility functions for the coauthorship PageRank toolkit.
"""

import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import networkx as nx
import numpy as np

from src.errors import UsageError
from src.models import AwardList, CitationProfile, RawEdge


def setup_logging(level: str = "INFO") -> None:
    """Setup logging configuration (always on the error stream)."""
    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        stream=sys.stderr,
        force=True,
    )


def create_output_directory(output_dir: str = "outputs") -> None:
    """Create output directory if it doesn't exist."""
    Path(output_dir).mkdir(parents=True, exist_ok=True)


def write_output(text: str, output_path: Optional[str] = None) -> None:
    """Write report text to a file (UTF-8, \\n line endings) or standard output."""
    if output_path is None or output_path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(output_path)
    create_output_directory(str(path.parent))
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    logging.info(f"Report saved to {path}")


def author_name(index: int) -> str:
    """Synthetic author id in the `Surname, Initials` shape of real data."""
    return f"Author{index:04d}, X"


def generate_synthetic_network(n: int = 1000, attach: int = 2, seed: int = 7,
                               max_weight: int = 4) -> nx.Graph:
    """Preferential-attachment coauthorship network with integer edge weights."""
    if not n > attach >= 1:
        raise UsageError(f"Synthetic network needs nodes > attach >= 1, got nodes={n}, attach={attach}")
    rng = np.random.default_rng(seed)
    graph = nx.barabasi_albert_graph(n, attach, seed=seed)
    for u, v in sorted(graph.edges()):
        graph[u][v]["weight"] = int(rng.integers(1, max_weight + 1))
    return nx.relabel_nodes(graph, {i: author_name(i) for i in graph.nodes})


def generate_synthetic_citations(graph: nx.Graph, seed: int = 7,
                                 citations_per_tie: float = 6.0) -> CitationProfile:
    """
    Per-paper citation lists whose totals grow with weighted degree.

    Each author writes roughly one paper per two joint papers plus a few
    solo ones; paper citations are Poisson around a degree-driven mean.
    """
    rng = np.random.default_rng(seed + 1)
    totals: Dict[str, int] = {}
    per_paper: Dict[str, List[int]] = {}
    for author in sorted(graph.nodes):
        strength = graph.degree(author, weight="weight")
        papers = max(1, int(round(strength / 2))) + int(rng.integers(0, 3))
        mean = citations_per_tie * strength / papers * float(rng.lognormal(0.0, 0.25))
        counts = [int(c) for c in rng.poisson(mean, size=papers)]
        per_paper[author] = counts
        totals[author] = int(sum(counts))
    return CitationProfile(totals=totals, per_paper=per_paper)


def generate_synthetic_awards(citations: CitationProfile, winners: int = 12,
                              seed: int = 7) -> AwardList:
    """Pick winners among the most cited authors, plus one outsider absent from the data."""
    rng = np.random.default_rng(seed + 2)
    ranked = sorted(citations.totals, key=lambda a: (-citations.totals[a], a))
    pool = ranked[:max(winners * 2, winners)]
    chosen = rng.choice(len(pool), size=min(winners, len(pool)), replace=False)
    names = {pool[int(i)] for i in chosen}
    names.add("Outsider, Z")
    return AwardList(winners=frozenset(names))


def network_records(graph: nx.Graph) -> List[RawEdge]:
    return [RawEdge(a=u, b=v, weight=float(data.get("weight", 1)))
            for u, v, data in sorted(graph.edges(data=True))]


def write_synthetic_dataset(out_dir: str, n: int = 1000, attach: int = 2, seed: int = 7,
                            winners: int = 12) -> Tuple[Path, Path, Path]:
    """
    Write edges.tsv, citations.tsv and awards.txt for a synthetic network.

    Returns:
        Paths of the three files
    """
    if winners < 0:
        raise UsageError(f"Winner count must be non-negative, got {winners}")
    graph = generate_synthetic_network(n, attach, seed)
    create_output_directory(out_dir)
    citations = generate_synthetic_citations(graph, seed)
    awards = generate_synthetic_awards(citations, winners, seed)

    out = Path(out_dir)
    edges_path, citations_path, awards_path = out / "edges.tsv", out / "citations.tsv", out / "awards.txt"
    with open(edges_path, "w", encoding="utf-8", newline="\n") as f:
        f.write("# authorA\tauthorB\tweight\n")
        for record in network_records(graph):
            f.write(f"{record.a}\t{record.b}\t{int(record.weight)}\n")
    with open(citations_path, "w", encoding="utf-8", newline="\n") as f:
        f.write("# author\ttotal\tper-paper counts\n")
        for author in sorted(citations.totals):
            papers = ",".join(str(c) for c in citations.per_paper[author])
            f.write(f"{author}\t{citations.totals[author]}\t{papers}\n")
    with open(awards_path, "w", encoding="utf-8", newline="\n") as f:
        for name in sorted(awards.winners):
            f.write(f"{name}\n")

    logging.info(f"Wrote synthetic dataset with {n} authors to {out}")
    return edges_path, citations_path, awards_path
