"""
Deterministic serialization of report bundles and ranking tables.
"""

import io
from typing import List

import pandas as pd

from src.models import Cell, RankingRow, RankingTable, ReportBundle, ReportSection

SIGNIFICANT_DIGITS = 6


def format_cell(value: Cell) -> str:
    """Render one cell: floats to 6 significant digits, None as blank."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    return str(value)


def section_frame(section: ReportSection) -> pd.DataFrame:
    rows = [[format_cell(cell) for cell in row] for row in section.rows]
    return pd.DataFrame(rows, columns=section.columns, dtype=object)


def render_section(section: ReportSection, fmt: str = "csv") -> str:
    frame = section_frame(section)
    if fmt == "markdown":
        table = frame.to_markdown(index=False, disable_numparse=True)
        return f"## {section.name}\n\n{table}\n"
    sep = "\t" if fmt == "tsv" else ","
    body = frame.to_csv(sep=sep, index=False, lineterminator="\n")
    return f"# {section.name}\n{body}"


def render_bundle(bundle: ReportBundle, fmt: str = "csv") -> str:
    """
    Serialize every section of a bundle in order.

    Warnings are not part of the data output; the CLI prints them to the
    error stream.
    """
    if fmt not in ("csv", "tsv", "markdown"):
        raise ValueError(f"Unknown output format: {fmt}")
    return "\n".join(render_section(section, fmt) for section in bundle.sections)


def ranking_table_to_csv(table: RankingTable) -> str:
    frame = pd.DataFrame(
        [[row.rank, row.author, format_cell(row.score)] for row in table.rows],
        columns=["rank", "author", "score"],
        dtype=object,
    )
    return frame.to_csv(index=False, lineterminator="\n")


def ranking_table_from_csv(text: str) -> RankingTable:
    """Parse the output of ranking_table_to_csv back into a table."""
    frame = pd.read_csv(io.StringIO(text), dtype={"author": str, "rank": int, "score": float},
                        keep_default_na=False)
    ranks: List[int] = frame["rank"].tolist()
    group_sizes = pd.Series(ranks).value_counts().to_dict()
    rows = [
        RankingRow(
            author=author,
            score=float(score),
            rank=int(rank),
            fractional_rank=rank + (group_sizes[rank] - 1) / 2.0,
        )
        for rank, author, score in zip(ranks, frame["author"], frame["score"])
    ]
    return RankingTable(rows=rows)
