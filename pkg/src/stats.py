"""
Statistical analyses over rankings: Spearman correlation, stratified
ranking-level correlation, log-log power-law fits, rank deltas and the
cross-damping correlation matrix.
"""

import logging
import math
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy import stats as sps

from src.errors import (
    AuthorSetMismatch, InsufficientBins, InvalidLevels, LengthMismatch, NonPositiveValues,
    TooFewObservations, UndefinedCorrelation,
)
from src.models import (
    AuthorId, CitationProfile, CorrelationLevel, CorrelationReport, DampingCorrelationMatrix,
    Direction, PowerLawFit, QuantilePair, RankDelta, RankDeltaReport, RankingRow, RankingTable,
    ScoreVector, TiePolicy,
)

logger = logging.getLogger(__name__)

DEFAULT_LEVELS = (30, 50, 100, 200, 300, 500)
DEFAULT_LOG_BINS = 20


def _as_map(scores) -> Dict[AuthorId, float]:
    if isinstance(scores, ScoreVector):
        return scores.as_dict()
    if isinstance(scores, RankingTable):
        return scores.score_map()
    return {author: float(value) for author, value in scores.items()}


def _require_same_keys(a: Mapping, b: Mapping) -> None:
    if set(a) != set(b):
        raise AuthorSetMismatch(set(a) - set(b), set(b) - set(a))


def ranking_table(scores, tie_policy: TiePolicy = "competition") -> RankingTable:
    """
    Order authors by score descending, ties by author id ascending.

    Each row carries the competition rank (1, 2, 2, 4) and the fractional
    rank (1, 2.5, 2.5, 4) of its score.
    """
    score_map = _as_map(scores)
    ordered = sorted(score_map.items(), key=lambda item: (-item[1], item[0]))
    rows: List[RankingRow] = []
    position = 0
    while position < len(ordered):
        end = position
        while end + 1 < len(ordered) and ordered[end + 1][1] == ordered[position][1]:
            end += 1
        fractional = (position + 1 + end + 1) / 2.0
        for author, score in ordered[position:end + 1]:
            rows.append(RankingRow(author=author, score=score, rank=position + 1,
                                   fractional_rank=fractional))
        position = end + 1
    return RankingTable(rows=rows, tie_policy=tie_policy)


def spearman(x: Sequence[float], y: Sequence[float]) -> Tuple[float, float]:
    """
    Spearman's rho with a two-sided p-value.

    Rho is the Pearson correlation of fractional (average) ranks. The
    p-value uses t = rho * sqrt((n-2) / (1-rho^2)) against Student's t with
    n-2 degrees of freedom, which is approximate for small n.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise LengthMismatch(f"Inputs differ in length: {x.shape} vs {y.shape}")
    n = x.shape[0]
    if n < 3:
        raise TooFewObservations(f"Spearman needs at least 3 observations, got {n}")

    rx = sps.rankdata(x, method="average")
    ry = sps.rankdata(y, method="average")
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelation("Spearman correlation is undefined for a constant input")

    rho = float(np.dot(dx, dy)) / math.sqrt(sxx * syy)
    rho = max(-1.0, min(1.0, rho))

    if abs(rho) == 1.0:
        p = 0.0
    else:
        t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
        p = float(2.0 * sps.t.sf(abs(t), n - 2))
    return rho, max(0.0, min(1.0, p))


def _base_order(base_scores: Mapping[AuthorId, float]) -> List[AuthorId]:
    return [author for author, _ in sorted(base_scores.items(), key=lambda i: (-i[1], i[0]))]


def stratified_correlation(scores_a, scores_b, base: str = "a",
                           levels: Optional[Sequence[int]] = None,
                           direction: Direction = "obverse") -> CorrelationReport:
    """
    Spearman correlation within slices of a base ranking.

    Obverse level k covers positions 1..k of the base ranking; reverse
    level k covers positions k..n. Slices smaller than three, or with a
    constant score column, are skipped and flagged in the report.

    Args:
        scores_a: First author->score mapping (or ScoreVector)
        scores_b: Second author->score mapping
        base: Which of the two orders the authors ("a" or "b")
        levels: Ascending cut points within [1, n]; defaults to [n]
        direction: "obverse" or "reverse"

    Returns:
        Correlation report with one entry per level
    """
    a, b = _as_map(scores_a), _as_map(scores_b)
    _require_same_keys(a, b)
    if base not in ("a", "b"):
        raise ValueError(f"base must be 'a' or 'b', got {base!r}")
    n = len(a)
    cuts = list(levels) if levels else [n]
    if any(c < 1 or c > n for c in cuts):
        raise InvalidLevels(f"Level cut points must lie in [1, {n}], got {cuts}")
    if cuts != sorted(cuts) or len(set(cuts)) != len(cuts):
        raise InvalidLevels(f"Level cut points must be strictly ascending, got {cuts}")

    order = _base_order(a if base == "a" else b)
    report_levels: List[CorrelationLevel] = []
    for cut in (cuts if direction == "obverse" else list(reversed(cuts))):
        if direction == "obverse":
            lower, upper, label = 1, cut, f"1~{cut}"
            members = order[:cut]
        else:
            lower, upper, label = cut, n, f"{n}~{cut}"
            members = order[cut - 1:]
        level = CorrelationLevel(label=label, lower=lower, upper=upper, direction=direction,
                                 size=len(members))
        try:
            rho, p = spearman([a[m] for m in members], [b[m] for m in members])
            level = level.model_copy(update={"rho": rho, "p_value": p})
        except (TooFewObservations, UndefinedCorrelation) as e:
            logger.warning(f"Skipping level {label}: {e}")
            level = level.model_copy(update={"skipped": True, "note": str(e)})
        report_levels.append(level)

    return CorrelationReport(direction=direction, base=base, n=n, levels=report_levels)


def _is_integral(values: np.ndarray) -> bool:
    return bool(np.all(np.equal(np.mod(values, 1.0), 0.0)))


def powerlaw_fit(values: Sequence[float], bins: int = DEFAULT_LOG_BINS) -> PowerLawFit:
    """
    Fit frequency(k) ~ k^-lambda by least squares on log-log points.

    Integer values are counted exactly per distinct value; continuous
    values go into `bins` logarithmically spaced bins whose counts are
    divided by bin width. Empty bins are dropped.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.size and np.any(values <= 0):
        raise NonPositiveValues("Power-law fitting needs strictly positive values")

    if values.size == 0:
        xs = freqs = np.array([])
    elif _is_integral(values):
        xs, counts = np.unique(values, return_counts=True)
        freqs = counts.astype(np.float64)
    else:
        lo, hi = values.min(), values.max()
        if lo == hi:
            raise InsufficientBins("All values are identical; a single bin cannot be fitted")
        edges = np.logspace(math.log10(lo), math.log10(hi), bins + 1)
        counts, edges = np.histogram(values, bins=edges)
        widths = np.diff(edges)
        centers = np.sqrt(edges[:-1] * edges[1:])
        keep = counts > 0
        xs = centers[keep]
        freqs = counts[keep] / widths[keep]

    if xs.size < 3:
        raise InsufficientBins(f"Need at least 3 non-empty bins, got {xs.size}")

    log_x = np.log10(xs)
    log_f = np.log10(freqs)
    fit = sps.linregress(log_x, log_f)
    return PowerLawFit(
        exponent=float(-fit.slope),
        intercept=float(fit.intercept),
        r=float(max(-1.0, min(1.0, fit.rvalue))),
        bins_used=int(xs.size),
        points=[(float(x), float(f)) for x, f in zip(xs, freqs)],
    )


def rank_deltas(a: RankingTable, b: RankingTable) -> RankDeltaReport:
    """
    Per-author rank change rank_a - rank_b (competition ranks), sorted by
    delta, with normal Q-Q plotting pairs for the delta distribution.
    """
    a.require_same_authors(b)
    ranks_a = a.rank_map("competition")
    ranks_b = b.rank_map("competition")
    deltas = [
        RankDelta(author=author, rank_a=int(ranks_a[author]), rank_b=int(ranks_b[author]),
                  delta=int(ranks_a[author] - ranks_b[author]))
        for author in ranks_a
    ]
    deltas.sort(key=lambda d: (d.delta, d.author))

    quantiles: List[QuantilePair] = []
    if deltas:
        theoretical, empirical = sps.probplot([d.delta for d in deltas], dist="norm", fit=False)
        quantiles = [QuantilePair(empirical=float(e), theoretical=float(t))
                     for t, e in zip(theoretical, empirical)]
    return RankDeltaReport(deltas=deltas, quantiles=quantiles)


def cross_damping_matrix(sweep: Mapping[float, ScoreVector]) -> DampingCorrelationMatrix:
    """Symmetric matrix of Spearman rho between every pair of damping factors."""
    dampings = list(sweep)
    if len(dampings) < 2:
        raise TooFewObservations("Cross-damping correlation needs at least 2 damping factors")

    maps = [sweep[d].as_dict() for d in dampings]
    common = set(maps[0])
    for m in maps[1:]:
        common &= set(m)
    authors = sorted(common)

    size = len(dampings)
    matrix = [[1.0] * size for _ in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            rho, _ = spearman([maps[i][x] for x in authors], [maps[j][x] for x in authors])
            matrix[i][j] = matrix[j][i] = rho
    return DampingCorrelationMatrix(dampings=dampings, matrix=matrix)


def scatter_points(citations: CitationProfile, scores) -> List[Tuple[AuthorId, int, float]]:
    """(author, citations, score) rows for a citation vs score scatter, in score order."""
    score_map = _as_map(scores)
    return [(author, citations.totals.get(author, 0), score_map[author])
            for author in _base_order(score_map)]


def citation_correlation_by_damping(sweep: Mapping[float, ScoreVector],
                                    citations: CitationProfile) -> Dict[float, Tuple[float, float]]:
    """Spearman (rho, p) between each swept score vector and citation totals."""
    result = {}
    for d, vector in sweep.items():
        score_map = vector.as_dict()
        authors = sorted(score_map)
        result[d] = spearman([score_map[x] for x in authors],
                             [citations.totals.get(x, 0) for x in authors])
    return result
