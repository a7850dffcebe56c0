"""
Author-impact metrics: h-index, citation rankings, top-k extraction and
award-winner prefix recall.
"""

import logging
from typing import Dict, Iterable, List, Mapping, Optional, Set, Tuple

import numpy as np

from src.errors import AuthorSetMismatch, InvalidK
from src.models import (
    AuthorId, AwardList, CitationProfile, ComparisonRow, ComparisonTable, RankingTable,
)
from src.stats import ranking_table

logger = logging.getLogger(__name__)


def h_index(per_paper: Iterable[int]) -> int:
    """Largest h such that at least h papers have h or more citations."""
    counts = np.sort(np.asarray(list(per_paper), dtype=np.int64))[::-1]
    if counts.size == 0:
        return 0
    positions = np.arange(1, counts.size + 1)
    return int(np.count_nonzero(counts >= positions))


def citation_rank(profile: CitationProfile, authors: Iterable[AuthorId]) -> RankingTable:
    """Rank authors by total citations; authors without a count get 0."""
    authors = list(dict.fromkeys(authors))
    missing = [a for a in authors if a not in profile.totals]
    if missing:
        logger.warning(f"{len(missing)} authors have no citation count and rank with 0")
    return ranking_table({a: float(profile.total(a) or 0) for a in authors})


def top_k(table: RankingTable, k: int) -> List[Tuple[AuthorId, float]]:
    if not 1 <= k <= len(table):
        raise InvalidK(f"k must lie in [1, {len(table)}], got {k}")
    return [(row.author, row.score) for row in table.rows[:k]]


def min_prefix_containing(table: RankingTable, winners: AwardList, count: int) -> Optional[int]:
    """
    Length of the shortest ranking prefix holding `count` winners.

    Winners absent from the table are ignored. Returns None when the
    table holds fewer than `count` winners.
    """
    if count < 1:
        raise InvalidK(f"count must be at least 1, got {count}")
    found = 0
    for position, row in enumerate(table.rows, start=1):
        if row.author in winners.winners:
            found += 1
            if found == count:
                return position
    return None


def award_recall(rankings: Mapping[str, RankingTable], winners: AwardList,
                 count: Optional[int] = None) -> Dict[str, Optional[int]]:
    """
    min_prefix_containing for each named ranking.

    `count` defaults to the number of winners present in the rankings.
    """
    if not rankings:
        return {}
    first = next(iter(rankings.values()))
    matched, unmatched = winners.split(first.authors())
    if unmatched:
        logger.warning(f"{len(unmatched)} award winners are not in the ranked author set")
    if count is None:
        count = len(matched)
    if count == 0:
        return {name: None for name in rankings}
    return {name: min_prefix_containing(table, winners, count) for name, table in rankings.items()}


def top_k_overlap(rankings: Mapping[str, RankingTable], k: int) -> Tuple[List[AuthorId], List[AuthorId]]:
    """(union, intersection) of the top-k author sets, each in first-seen order."""
    union: Dict[AuthorId, None] = {}
    shared: Optional[Set[AuthorId]] = None
    for table in rankings.values():
        heads = [author for author, _ in top_k(table, min(k, len(table)))]
        union.update(dict.fromkeys(heads))
        shared = set(heads) if shared is None else shared & set(heads)
    shared = shared or set()
    return list(union), [a for a in union if a in shared]


def comparison_table(rankings: Mapping[str, RankingTable],
                     profile: Optional[CitationProfile] = None,
                     winners: Optional[AwardList] = None,
                     extra_columns: Optional[Mapping[str, Mapping[AuthorId, int]]] = None,
                     primary: Optional[str] = None) -> ComparisonTable:
    """
    Join several rankings with citation, h-index and extra columns.

    Rows follow the display order of the primary ranking (the first one
    unless named). h-index is only filled from per-paper data.
    """
    if not rankings:
        raise ValueError("comparison_table needs at least one ranking")
    names = list(rankings)
    primary = primary or names[0]
    if primary not in rankings:
        raise KeyError(f"Primary ranking '{primary}' is not among {names}")

    base = rankings[primary]
    base_authors = set(base.authors())
    for name in names:
        other = set(rankings[name].authors())
        if other != base_authors:
            raise AuthorSetMismatch(base_authors - other, other - base_authors)

    rank_maps = {name: rankings[name].rank_map("competition") for name in names}
    extra_columns = dict(extra_columns or {})
    has_h = profile is not None and profile.has_per_paper()

    unmatched: List[AuthorId] = []
    if winners is not None:
        _, unmatched = winners.split(base_authors)
        if unmatched:
            logger.warning(f"{len(unmatched)} award winners are not in the compared author set")

    rows = []
    for author in base.authors():
        rows.append(ComparisonRow(
            author=author,
            ranks={name: int(rank_maps[name][author]) for name in names},
            citations=profile.totals.get(author, 0) if profile is not None else None,
            h_index=(h_index(profile.per_paper[author])
                     if has_h and author in profile.per_paper else None),
            extras={col: values.get(author) for col, values in extra_columns.items()},
            winner=winners is not None and author in winners.winners,
        ))

    return ComparisonTable(
        primary=primary,
        ranking_names=names,
        has_citations=profile is not None,
        has_h_index=has_h,
        has_winners=winners is not None,
        extra_names=list(extra_columns),
        rows=rows,
        unmatched_winners=unmatched,
    )
