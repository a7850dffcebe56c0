"""
Standard and citation-personalized PageRank over a stochastic operator.

The fixed point x = (1-d) v + d M x is found by power iteration; the
closed form x = (1-d) (I - dM)^-1 v is available as a dense oracle.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Optional, Sequence

import numpy as np

from src.errors import (
    EmptyGraph, InvalidDamping, NonConvergence, TooLargeForDirectSolve, ZeroTeleportMass,
)
from src.graph import StochasticOperator
from src.models import AuthorId, CitationProfile, DampingSchedule, ScoreVector, TeleportVector

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-12
DEFAULT_MAX_ITER = 1000
DIRECT_SOLVE_LIMIT = 5000


def uniform_teleport(n: int, nodes: Optional[Sequence[AuthorId]] = None) -> TeleportVector:
    """Uniform personalization 1/n over n nodes."""
    if n < 1:
        raise EmptyGraph("Uniform teleport needs at least one node")
    if nodes is not None:
        nodes = tuple(nodes)
        if len(nodes) != n:
            raise ValueError(f"Got {len(nodes)} node ids for n={n}")
    return TeleportVector(entries=np.full(n, 1.0 / n), nodes=nodes, kind="uniform")


def citation_teleport(citations: CitationProfile, nodes: Sequence[AuthorId]) -> TeleportVector:
    """
    Personalization proportional to citation counts, restricted to `nodes`.

    Authors without a citation count get 0; authors in the profile but not
    in `nodes` are ignored.
    """
    nodes = tuple(nodes)
    if not nodes:
        raise EmptyGraph("Citation teleport needs at least one node")

    missing = tuple(n for n in nodes if n not in citations.totals)
    if missing:
        logger.warning(f"{len(missing)} authors have no citation count and default to 0")
    node_set = set(nodes)
    ignored = sum(1 for author in citations.totals if author not in node_set)
    if ignored:
        logger.warning(f"{ignored} authors with citation counts are not in the ranked node set")

    counts = np.array([citations.total(n) or 0 for n in nodes], dtype=np.float64)
    total = counts.sum()
    if total <= 0:
        raise ZeroTeleportMass(f"All {len(nodes)} authors have zero citations")
    return TeleportVector(nodes=nodes, entries=counts / total, kind="citations", missing_authors=missing)


def _check_inputs(op: StochasticOperator, teleport: TeleportVector, d: float) -> None:
    if not 0.0 <= d < 1.0:
        raise InvalidDamping(f"Damping factor must lie in [0, 1), got {d}")
    if len(teleport) != op.size:
        raise ValueError(f"Teleport has {len(teleport)} entries but operator has {op.size} nodes")
    if teleport.nodes is not None and teleport.nodes != op.nodes:
        raise ValueError("Teleport vector is not indexed like the operator's nodes")


def pagerank(op: StochasticOperator, teleport: TeleportVector, d: float = 0.85,
             tol: float = DEFAULT_TOLERANCE, max_iter: int = DEFAULT_MAX_ITER) -> ScoreVector:
    """
    Power iteration for x <- (1-d) v + d M x, starting from x0 = v.

    Args:
        op: Column-stochastic operator of a connected component
        teleport: Personalization vector v
        d: Damping factor in [0, 1)
        tol: L1 change below which iteration stops
        max_iter: Iteration budget

    Returns:
        Score vector normalized to sum 1
    """
    _check_inputs(op, teleport, d)
    if tol <= 0:
        raise ValueError(f"Tolerance must be positive, got {tol}")

    v = teleport.entries
    base = (1.0 - d) * v
    x = v.copy()
    residual = float("inf")
    for iteration in range(1, max_iter + 1):
        x_next = base + d * op.apply(x)
        residual = float(np.abs(x_next - x).sum())
        x = x_next
        if residual < tol:
            logger.debug(f"PageRank d={d} converged in {iteration} iterations (residual {residual:.2e})")
            return _score_vector(op, x, d, iteration, residual, teleport)

    raise NonConvergence(residual, max_iter, d)


def solve_direct(op: StochasticOperator, teleport: TeleportVector, d: float = 0.85) -> ScoreVector:
    """Dense solve of (I - dM) x = (1-d) v; the oracle for pagerank."""
    _check_inputs(op, teleport, d)
    n = op.size
    if n > DIRECT_SOLVE_LIMIT:
        raise TooLargeForDirectSolve(f"{n} nodes exceeds the direct-solve limit of {DIRECT_SOLVE_LIMIT}")

    system = np.eye(n) - d * op.dense()
    rhs = (1.0 - d) * teleport.entries
    x = np.linalg.solve(system, rhs)
    residual = float(np.abs(system @ x - rhs).sum())
    return _score_vector(op, x, d, 0, residual, teleport)


def _score_vector(op: StochasticOperator, x: np.ndarray, d: float, iterations: int,
                  residual: float, teleport: TeleportVector) -> ScoreVector:
    # a lone node has a zero column, so its mass is (1-d) before normalizing
    x = x / x.sum()
    return ScoreVector(
        nodes=op.nodes,
        entries=x,
        damping=d,
        iterations=iterations,
        residual=residual,
        teleport_kind=teleport.kind,
    )


def damping_sweep(op: StochasticOperator, teleport: TeleportVector, schedule: DampingSchedule,
                  tol: float = DEFAULT_TOLERANCE, max_iter: int = DEFAULT_MAX_ITER,
                  workers: int = 1) -> Dict[float, ScoreVector]:
    """
    Run pagerank once per damping factor.

    Results are keyed by damping factor in schedule order regardless of
    how many workers evaluate them.
    """
    def run(d: float) -> ScoreVector:
        try:
            return pagerank(op, teleport, d, tol, max_iter)
        except NonConvergence as e:
            raise e.with_damping(d)

    logger.info(f"Sweeping {len(schedule)} damping factors over {op.size} nodes")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, schedule.values))
    else:
        results = [run(d) for d in schedule.values]
    return dict(zip(schedule.values, results))
