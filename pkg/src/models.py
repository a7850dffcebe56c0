"""
Pydantic models for the coauthorship PageRank toolkit.
"""

from typing import Dict, FrozenSet, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.errors import AuthorSetMismatch, InvalidSchedule


AuthorId = str
NormalizationMode = Literal["weighted", "unweighted"]
TeleportKind = Literal["uniform", "citations"]
TiePolicy = Literal["competition", "fractional"]
Direction = Literal["obverse", "reverse"]

# Damping factors used throughout the study, in reporting order.
DEFAULT_SCHEDULE: Tuple[float, ...] = (0.85, 0.75, 0.65, 0.55, 0.45, 0.35, 0.25, 0.15)


class RawEdge(BaseModel):
    """One coauthorship record as read from input, before validation."""
    model_config = ConfigDict(frozen=True)

    a: str
    b: str
    weight: float = 1.0
    line_number: Optional[int] = None


class Edge(BaseModel):
    """An undirected weighted edge of the coauthorship graph."""
    model_config = ConfigDict(frozen=True)

    a: AuthorId
    b: AuthorId
    weight: float = Field(gt=0)

    @model_validator(mode="after")
    def _no_self_loop(self) -> "Edge":
        if self.a == self.b:
            raise ValueError(f"self-loop on '{self.a}'")
        return self


class ComponentSummary(BaseModel):
    index: int
    size: int
    edges: int
    smallest_member: AuthorId


class CitationProfile(BaseModel):
    """Citation totals per author, with optional per-paper counts."""
    totals: Dict[AuthorId, int] = Field(default_factory=dict)
    per_paper: Dict[AuthorId, List[int]] = Field(default_factory=dict)

    @field_validator("totals")
    @classmethod
    def _non_negative_totals(cls, value: Dict[AuthorId, int]) -> Dict[AuthorId, int]:
        for author, count in value.items():
            if count < 0:
                raise ValueError(f"negative citation total for '{author}'")
        return value

    @field_validator("per_paper")
    @classmethod
    def _non_negative_papers(cls, value: Dict[AuthorId, List[int]]) -> Dict[AuthorId, List[int]]:
        for author, counts in value.items():
            if any(c < 0 for c in counts):
                raise ValueError(f"negative per-paper count for '{author}'")
        return value

    def total(self, author: AuthorId) -> Optional[int]:
        return self.totals.get(author)

    def has_per_paper(self) -> bool:
        return bool(self.per_paper)


class AwardList(BaseModel):
    """Set of award-winning authors used as ground truth."""
    winners: FrozenSet[AuthorId]

    @field_validator("winners")
    @classmethod
    def _non_empty(cls, value: FrozenSet[AuthorId]) -> FrozenSet[AuthorId]:
        if not value:
            raise ValueError("award list must not be empty")
        return value

    def split(self, authors) -> Tuple[List[AuthorId], List[AuthorId]]:
        """Return (matched, unmatched) winners against an author collection, both sorted."""
        present = set(authors)
        matched = sorted(w for w in self.winners if w in present)
        unmatched = sorted(w for w in self.winners if w not in present)
        return matched, unmatched


class TeleportVector(BaseModel):
    """Personalization vector v, indexed like the graph's node order."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    entries: np.ndarray
    nodes: Optional[Tuple[AuthorId, ...]] = None
    kind: TeleportKind = "uniform"
    missing_authors: Tuple[AuthorId, ...] = ()

    @model_validator(mode="after")
    def _is_distribution(self) -> "TeleportVector":
        if self.entries.ndim != 1 or (self.nodes is not None and len(self.nodes) != self.entries.shape[0]):
            raise ValueError("teleport dimension does not match node count")
        if np.any(self.entries < 0):
            raise ValueError("teleport entries must be non-negative")
        if abs(float(self.entries.sum()) - 1.0) > 1e-12:
            raise ValueError(f"teleport entries sum to {self.entries.sum()!r}, not 1")
        return self

    def __len__(self) -> int:
        return len(self.entries)


class ScoreVector(BaseModel):
    """Result of a PageRank computation."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    nodes: Tuple[AuthorId, ...]
    entries: np.ndarray
    damping: float
    iterations: int = 0
    residual: float = 0.0
    teleport_kind: TeleportKind = "uniform"

    @model_validator(mode="after")
    def _sums_to_one(self) -> "ScoreVector":
        if self.entries.shape != (len(self.nodes),):
            raise ValueError("score dimension does not match node count")
        if abs(float(self.entries.sum()) - 1.0) > 1e-9:
            raise ValueError(f"scores sum to {self.entries.sum()!r}, not 1")
        return self

    @property
    def label(self) -> str:
        name = "PR_W" if self.teleport_kind == "citations" else "PR"
        return f"{name}({self.damping:g})"

    def as_dict(self) -> Dict[AuthorId, float]:
        return {node: float(score) for node, score in zip(self.nodes, self.entries)}

    def __len__(self) -> int:
        return len(self.nodes)


class DampingSchedule(BaseModel):
    """Ordered list of damping factors for a sweep."""
    model_config = ConfigDict(frozen=True)

    values: Tuple[float, ...] = DEFAULT_SCHEDULE

    @field_validator("values")
    @classmethod
    def _validate_values(cls, values: Tuple[float, ...]) -> Tuple[float, ...]:
        if not values:
            raise InvalidSchedule("damping schedule is empty")
        for d in values:
            if not 0.0 < d < 1.0:
                raise InvalidSchedule(f"damping factor {d} outside (0, 1)")
        if len(set(values)) != len(values):
            raise InvalidSchedule(f"duplicate damping factors in {list(values)}")
        return values

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)


class RankingRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    author: AuthorId
    score: float
    rank: int = Field(ge=1)
    fractional_rank: float = Field(ge=1)


class RankingTable(BaseModel):
    """Total display order over authors with competition and fractional ranks."""
    rows: List[RankingRow]
    tie_policy: TiePolicy = "competition"

    def __len__(self) -> int:
        return len(self.rows)

    def authors(self) -> List[AuthorId]:
        return [row.author for row in self.rows]

    def rank_of(self, author: AuthorId, policy: Optional[TiePolicy] = None) -> Union[int, float]:
        row = self._index()[author]
        if (policy or self.tie_policy) == "fractional":
            return row.fractional_rank
        return row.rank

    def rank_map(self, policy: Optional[TiePolicy] = None) -> Dict[AuthorId, Union[int, float]]:
        use_fractional = (policy or self.tie_policy) == "fractional"
        return {r.author: (r.fractional_rank if use_fractional else r.rank) for r in self.rows}

    def score_map(self) -> Dict[AuthorId, float]:
        return {row.author: row.score for row in self.rows}

    def require_same_authors(self, other: "RankingTable") -> None:
        mine, theirs = set(self.authors()), set(other.authors())
        if mine != theirs:
            raise AuthorSetMismatch(mine - theirs, theirs - mine)

    def _index(self) -> Dict[AuthorId, RankingRow]:
        return {row.author: row for row in self.rows}


class CorrelationLevel(BaseModel):
    label: str
    lower: int = Field(ge=1)
    upper: int = Field(ge=1)
    direction: Direction
    size: int
    rho: Optional[float] = Field(default=None, ge=-1, le=1)
    p_value: Optional[float] = Field(default=None, ge=0, le=1)
    skipped: bool = False
    note: Optional[str] = None


class CorrelationReport(BaseModel):
    """Spearman correlations within slices of a base ranking."""
    direction: Direction
    base: Literal["a", "b"]
    n: int
    levels: List[CorrelationLevel]

    @property
    def coefficients(self) -> List[Optional[float]]:
        return [level.rho for level in self.levels]

    @property
    def p_values(self) -> List[Optional[float]]:
        return [level.p_value for level in self.levels]


class PowerLawFit(BaseModel):
    """Log-log least squares fit of a frequency distribution."""
    exponent: float
    intercept: float
    r: float = Field(ge=-1, le=1)
    bins_used: int = Field(ge=3)
    points: List[Tuple[float, float]] = Field(default_factory=list)


class RankDelta(BaseModel):
    author: AuthorId
    rank_a: int
    rank_b: int
    delta: int


class QuantilePair(BaseModel):
    empirical: float
    theoretical: float


class RankDeltaReport(BaseModel):
    deltas: List[RankDelta]
    quantiles: List[QuantilePair]


class DampingCorrelationMatrix(BaseModel):
    """Spearman rho between score vectors of every pair of damping factors."""
    dampings: List[float]
    matrix: List[List[float]]

    def entry(self, d1: float, d2: float) -> float:
        return self.matrix[self.dampings.index(d1)][self.dampings.index(d2)]


class ComparisonRow(BaseModel):
    author: AuthorId
    ranks: Dict[str, int]
    citations: Optional[int] = None
    h_index: Optional[int] = None
    extras: Dict[str, Optional[int]] = Field(default_factory=dict)
    winner: bool = False


class ComparisonTable(BaseModel):
    """Side-by-side metric comparison, one row per author."""
    primary: str
    ranking_names: List[str]
    has_citations: bool = False
    has_h_index: bool = False
    has_winners: bool = False
    extra_names: List[str] = Field(default_factory=list)
    rows: List[ComparisonRow]
    unmatched_winners: List[AuthorId] = Field(default_factory=list)


class EdgeListParse(BaseModel):
    """Records parsed from an edge list plus the malformed-line warnings."""
    records: List[RawEdge]
    warnings: List[str] = Field(default_factory=list)


Cell = Union[str, int, float, None]


class ReportSection(BaseModel):
    name: str
    columns: List[str]
    rows: List[List[Cell]] = Field(default_factory=list)


class ReportBundle(BaseModel):
    """All outputs of one command, keyed by analysis name."""
    command: str
    sections: List[ReportSection] = Field(default_factory=list)
    warnings: List[str] = Field(default_factory=list)

    def section(self, name: str) -> ReportSection:
        for section in self.sections:
            if section.name == name:
                return section
        raise KeyError(name)

    def add(self, name: str, columns: List[str], rows: List[List[Cell]]) -> ReportSection:
        section = ReportSection(name=name, columns=columns, rows=rows)
        self.sections.append(section)
        return section
