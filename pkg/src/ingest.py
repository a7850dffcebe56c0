"""
Parsers for the tab-separated input files.

Edge lists are forgiving (malformed lines become warnings); citation,
award and extra-column files are strict.
"""

import logging
from pathlib import Path
from typing import Dict, Iterator, List, Tuple, Union

from src.errors import (
    DuplicateAuthor, EmptyAwardList, InvalidCount, IoError, MalformedLine, NoValidRecords,
)
from src.models import AwardList, CitationProfile, EdgeListParse, RawEdge

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _read_lines(path: PathLike) -> List[str]:
    try:
        with open(path, "r", encoding="utf-8-sig", newline="\n") as f:
            return [line.removesuffix("\n").removesuffix("\r") for line in f]
    except (OSError, UnicodeDecodeError) as e:
        logger.error(f"Failed to read {path}: {e}")
        raise IoError(f"Cannot read {path}: {e}") from e


def _data_lines(path: PathLike) -> Iterator[Tuple[int, str]]:
    """Yield (line number, text) for non-blank, non-comment lines."""
    for number, line in enumerate(_read_lines(path), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield number, line


def _parse_count(path: PathLike, number: int, text: str) -> int:
    try:
        value = int(text.strip())
    except ValueError:
        raise InvalidCount(str(path), number, f"citation count {text.strip()!r} is not an integer")
    if value < 0:
        raise InvalidCount(str(path), number, f"negative citation count {value}")
    return value


def parse_edge_list(path: PathLike) -> EdgeListParse:
    """
    Parse `authorA<TAB>authorB[<TAB>weight]` lines.

    Args:
        path: Edge list file (UTF-8)

    Returns:
        Valid records in file order and one warning per malformed line
    """
    records: List[RawEdge] = []
    warnings: List[str] = []
    for number, line in _data_lines(path):
        fields = line.split("\t")
        problem = None
        weight = 1.0
        if len(fields) not in (2, 3):
            problem = f"expected 2 or 3 tab-separated fields, got {len(fields)}"
        elif not fields[0].strip() or not fields[1].strip():
            problem = "empty author name"
        elif len(fields) == 3 and fields[2].strip():
            try:
                weight = float(fields[2])
            except ValueError:
                problem = f"weight {fields[2].strip()!r} is not a number"
            else:
                if not weight > 0 or weight == float("inf"):
                    problem = f"weight {weight} is not a positive finite number"
        if problem:
            warnings.append(f"{path}:{number}: {problem}")
            continue
        records.append(RawEdge(a=fields[0].strip(), b=fields[1].strip(), weight=weight,
                               line_number=number))

    if warnings:
        logger.warning(f"Skipped {len(warnings)} malformed lines in {path}")
    if not records:
        raise NoValidRecords(f"No valid edge records in {path}")
    logger.info(f"Parsed {len(records)} edge records from {path}")
    return EdgeListParse(records=records, warnings=warnings)


def parse_citations(path: PathLike) -> CitationProfile:
    """Parse `author<TAB>total[<TAB>c1,c2,...]` lines."""
    totals: Dict[str, int] = {}
    per_paper: Dict[str, List[int]] = {}
    for number, line in _data_lines(path):
        fields = line.split("\t")
        if len(fields) not in (2, 3) or not fields[0].strip():
            raise MalformedLine(str(path), number, "expected author<TAB>total[<TAB>per-paper counts]")
        author = fields[0].strip()
        if author in totals:
            raise DuplicateAuthor(author, number)
        totals[author] = _parse_count(path, number, fields[1])
        if len(fields) == 3 and fields[2].strip():
            per_paper[author] = [_parse_count(path, number, c) for c in fields[2].split(",")]

    logger.info(f"Parsed citation counts for {len(totals)} authors from {path}")
    return CitationProfile(totals=totals, per_paper=per_paper)


def parse_awards(path: PathLike) -> AwardList:
    """One author id per line; duplicates collapse."""
    winners = {line.strip() for _, line in _data_lines(path)}
    if not winners:
        raise EmptyAwardList(f"No award winners listed in {path}")
    return AwardList(winners=frozenset(winners))


def parse_extra_column(path: PathLike) -> Dict[str, int]:
    """`author<TAB>integer` lines, e.g. program committee membership counts."""
    values: Dict[str, int] = {}
    for number, line in _data_lines(path):
        fields = line.split("\t")
        if len(fields) != 2 or not fields[0].strip():
            raise MalformedLine(str(path), number, "expected author<TAB>integer")
        author = fields[0].strip()
        if author in values:
            raise DuplicateAuthor(author, number)
        values[author] = _parse_count(path, number, fields[1])
    return values
