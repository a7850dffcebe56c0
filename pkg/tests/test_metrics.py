"""
Tests for h-index, citation ranking, top-k, prefix recall and the
comparison table.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.errors import AuthorSetMismatch, InvalidK
from src.metrics import (
    award_recall, citation_rank, comparison_table, h_index, min_prefix_containing, top_k,
    top_k_overlap,
)
from src.models import AwardList, CitationProfile
from src.stats import ranking_table


def brute_h_index(counts):
    return max((h for h in range(len(counts) + 1) if sum(1 for c in counts if c >= h) >= h), default=0)


@pytest.mark.unit
class TestHIndex:
    """Test h_index."""

    @pytest.mark.parametrize("counts,expected", [
        ([], 0),
        ([5, 4, 3, 2, 1], 3),
        ([3, 1, 1], 1),
        ([0, 0], 0),
        ([10, 10, 10], 3),
    ])
    def test_examples(self, counts, expected):
        """Test hand-checked h-index values."""
        assert h_index(counts) == expected

    def test_brute_force(self, rng):
        """Test 1,000 random citation lists against an all-h scan."""
        for _ in range(1000):
            counts = rng.integers(0, 101, size=int(rng.integers(0, 51))).tolist()
            h = h_index(counts)
            assert h == brute_h_index(counts)
            assert h <= len(counts)
            assert h <= max(counts, default=0)
            assert h_index(list(reversed(counts))) == h
            assert h_index(counts + [h + 1]) >= h

    @given(st.lists(st.integers(0, 200), max_size=60))
    @settings(max_examples=200, deadline=None)
    def test_properties(self, counts):
        """Test bounds, order independence and monotonicity under an extra paper."""
        h = h_index(counts)

        assert h == brute_h_index(counts)
        assert 0 <= h <= min(len(counts), max(counts, default=0))
        assert h_index(sorted(counts)) == h
        assert h <= h_index(counts + [max(counts, default=0) + 1]) <= h + 1


@pytest.mark.unit
class TestCitationRank:
    """Test citation_rank."""

    def test_ties(self, citations_abc):
        """Test competition and fractional ranks of (A:10, B:5, C:5)."""
        table = citation_rank(citations_abc, ["A", "B", "C"])

        assert table.rank_map() == {"A": 1, "B": 2, "C": 2}
        assert table.rank_map("fractional") == {"A": 1.0, "B": 2.5, "C": 2.5}

    def test_single_author(self):
        """Test a single author ranks first."""
        table = citation_rank(CitationProfile(totals={"A": 3}), ["A"])

        assert table.rank_of("A") == 1

    def test_missing_author_ranks_with_zero(self, citations_abc):
        """Test that an author without a count ranks last with 0."""
        table = citation_rank(citations_abc, ["A", "B", "C", "D"])

        assert table.authors()[-1] == "D"
        assert table.rows[-1].score == 0.0

    def test_matches_sort(self, rng):
        """Test order on 10 random counts against a brute-force sort."""
        totals = {f"a{i}": int(c) for i, c in enumerate(rng.integers(0, 50, size=10))}
        table = citation_rank(CitationProfile(totals=totals), list(totals))

        assert table.authors() == sorted(totals, key=lambda a: (-totals[a], a))

    def test_scale_invariance(self, rng):
        """Test that multiplying all counts by a constant keeps the order."""
        totals = {f"a{i}": int(c) for i, c in enumerate(rng.integers(0, 50, size=25))}
        scaled = {a: 7 * c for a, c in totals.items()}

        assert (citation_rank(CitationProfile(totals=totals), list(totals)).authors()
                == citation_rank(CitationProfile(totals=scaled), list(totals)).authors())


@pytest.mark.unit
class TestTopK:
    """Test top_k."""

    def test_full_and_single(self):
        """Test k = n and k = 1 with tied maxima."""
        table = ranking_table({"b": 2.0, "a": 2.0, "c": 1.0})

        assert top_k(table, 3) == [("a", 2.0), ("b", 2.0), ("c", 1.0)]
        assert top_k(table, 1) == [("a", 2.0)]

    def test_matches_selection(self, rng):
        """Test k = 20 on a 100-author table against sort-and-slice."""
        scores = {f"a{i:03d}": float(v) for i, v in enumerate(rng.random(100))}
        expected = sorted(scores.items(), key=lambda item: (-item[1], item[0]))[:20]

        assert top_k(ranking_table(scores), 20) == expected

    @pytest.mark.parametrize("k", [0, 4])
    def test_out_of_range(self, k):
        """Test k outside [1, n] is rejected."""
        with pytest.raises(InvalidK):
            top_k(ranking_table({"a": 1.0, "b": 2.0, "c": 3.0}), k)

    def test_overlap(self):
        """Test union and intersection of top-k sets."""
        first = ranking_table({"a": 3.0, "b": 2.0, "c": 1.0})
        second = ranking_table({"c": 3.0, "a": 2.0, "b": 1.0})

        assert top_k_overlap({"x": first, "y": second}, 2) == (["a", "b", "c"], ["a"])


def ordered_table(authors):
    return ranking_table({a: float(len(authors) - i) for i, a in enumerate(authors)})


@pytest.mark.unit
class TestPrefixRecall:
    """Test min_prefix_containing and award_recall."""

    def test_winners_on_top(self):
        """Test that winners in the first count rows give L = count."""
        table = ordered_table(["w1", "w2", "w3", "x", "y"])
        winners = AwardList(winners=frozenset({"w1", "w2", "w3"}))

        assert min_prefix_containing(table, winners, 3) == 3

    def test_single_winner_last(self):
        """Test winner C at the end of (A, B, C)."""
        table = ordered_table(["A", "B", "C"])

        assert min_prefix_containing(table, AwardList(winners=frozenset({"C"})), 1) == 3

    def test_not_reachable(self):
        """Test None when the table holds fewer winners than required."""
        table = ordered_table(["A", "B", "C"])
        winners = AwardList(winners=frozenset({"A", "Ghost"}))

        assert min_prefix_containing(table, winners, 2) is None

    def test_invalid_count(self):
        """Test count < 1 is rejected."""
        with pytest.raises(InvalidK):
            min_prefix_containing(ordered_table(["A"]), AwardList(winners=frozenset({"A"})), 0)

    def test_planted_and_monotone(self, rng):
        """Test planted top-k winners and monotonicity over random placements."""
        authors = [f"a{i:03d}" for i in range(60)]
        table = ordered_table(authors)
        for k in range(1, 11):
            assert min_prefix_containing(table, AwardList(winners=frozenset(authors[:k])), k) == k

        for _ in range(100):
            chosen = rng.choice(60, size=int(rng.integers(1, 15)), replace=False)
            winners = AwardList(winners=frozenset(authors[int(i)] for i in chosen))
            lengths = [min_prefix_containing(table, winners, c) for c in range(1, len(chosen) + 1)]
            assert all(later >= earlier for earlier, later in zip(lengths, lengths[1:]))
            assert lengths[-1] == max(int(i) for i in chosen) + 1

    def test_award_recall_ignores_absent_winners(self):
        """Test that recall counts only winners present in the rankings."""
        rankings = {
            "first": ordered_table(["A", "B", "C", "D"]),
            "second": ordered_table(["D", "C", "B", "A"]),
        }
        winners = AwardList(winners=frozenset({"A", "B", "Ghost"}))

        assert award_recall(rankings, winners) == {"first": 2, "second": 4}
        assert award_recall(rankings, winners, count=3) == {"first": None, "second": None}

    def test_award_split_against_ranking(self, rng):
        """Test 12 winners against a 20-author ranking by set intersection."""
        authors = [f"a{i:02d}" for i in range(20)]
        names = [authors[int(i)] for i in rng.choice(20, size=8, replace=False)]
        names += [f"ghost{i}" for i in range(4)]
        winners = AwardList(winners=frozenset(names))

        matched, unmatched = winners.split(ordered_table(authors).authors())
        assert matched == sorted(set(names) & set(authors))
        assert unmatched == sorted(set(names) - set(authors))


@pytest.mark.unit
class TestComparisonTable:
    """Test comparison_table."""

    def test_single_ranking(self):
        """Test one ranking without extras gives author and rank only."""
        table = comparison_table({"PR(0.85)": ordered_table(["A", "B"])})

        assert table.ranking_names == ["PR(0.85)"]
        assert not table.has_citations and not table.has_h_index and not table.has_winners
        assert [(row.author, row.ranks) for row in table.rows] == [
            ("A", {"PR(0.85)": 1}), ("B", {"PR(0.85)": 2}),
        ]

    def test_identical_rankings(self):
        """Test that two equal rankings give identical rank columns."""
        ranking = ordered_table(["A", "B", "C"])
        table = comparison_table({"x": ranking, "y": ranking})

        assert all(row.ranks["x"] == row.ranks["y"] for row in table.rows)

    def test_join_matches_brute_force(self, rng):
        """Test three rankings over 15 authors cell by cell."""
        authors = [f"a{i:02d}" for i in range(15)]
        rankings = {
            name: ranking_table({a: float(v) for a, v in zip(authors, rng.integers(0, 8, size=15))})
            for name in ("PR_W(0.55)", "PR(0.85)", "PR(0.15)")
        }
        totals = {a: int(c) for a, c in zip(authors, rng.integers(0, 100, size=15))}
        per_paper = {a: [int(c) for c in rng.integers(0, 20, size=5)] for a in authors[:10]}
        profile = CitationProfile(totals=totals, per_paper=per_paper)
        winners = AwardList(winners=frozenset({authors[0], authors[7], "Ghost"}))
        extras = {"pc": {authors[1]: 3, authors[2]: 1}}

        table = comparison_table(rankings, profile, winners, extras, primary="PR(0.85)")

        assert [row.author for row in table.rows] == rankings["PR(0.85)"].authors()
        assert table.unmatched_winners == ["Ghost"]
        for row in table.rows:
            for name, ranking in rankings.items():
                assert row.ranks[name] == ranking.rank_of(row.author)
            assert row.citations == totals[row.author]
            expected_h = brute_h_index(per_paper[row.author]) if row.author in per_paper else None
            assert row.h_index == expected_h
            assert row.extras == {"pc": extras["pc"].get(row.author)}
            assert row.winner == (row.author in {authors[0], authors[7]})

    def test_author_mismatch(self):
        """Test that rankings over different authors are rejected."""
        with pytest.raises(AuthorSetMismatch):
            comparison_table({"x": ordered_table(["A", "B"]), "y": ordered_table(["A", "C"])})

    def test_no_h_index_without_per_paper(self, citations_abc):
        """Test that totals alone never produce an h-index column."""
        table = comparison_table({"x": ordered_table(["A", "B", "C"])}, citations_abc)

        assert table.has_citations
        assert not table.has_h_index
        assert all(row.h_index is None for row in table.rows)
