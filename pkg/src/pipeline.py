"""
Pipeline that turns input files into a report bundle for one command.
"""

import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple

from pydantic import BaseModel, Field

from src.config import RunConfig
from src.errors import AnalysisError, InsufficientBins, NonPositiveValues, UsageError
from src.graph import (
    CoauthorGraph, StochasticOperator, build_graph, component_summary, components,
    largest_component, stochastic_operator,
)
from src.ingest import parse_awards, parse_citations, parse_edge_list, parse_extra_column
from src.metrics import award_recall, citation_rank, comparison_table, top_k, top_k_overlap
from src.models import (
    AwardList, CitationProfile, CorrelationReport, RankingTable, ReportBundle,
    ScoreVector, TeleportVector,
)
from src.ranker import citation_teleport, damping_sweep, pagerank, uniform_teleport
from src.stats import (
    citation_correlation_by_damping, cross_damping_matrix, powerlaw_fit, rank_deltas,
    ranking_table, scatter_points, stratified_correlation,
)

logger = logging.getLogger(__name__)

COMMANDS = ("component", "rank", "sweep", "correlate", "fit", "deltas", "compare")


class PipelineInputs(BaseModel):
    """Input file locations for a run."""
    edges: Path
    citations: Optional[Path] = None
    awards: Optional[Path] = None
    extras: Dict[str, Path] = Field(default_factory=dict)


class AnalysisPipeline:
    """Runs parse -> graph -> component -> operator -> analyses -> bundle."""

    def __init__(self, config: RunConfig):
        self.config = config

    @contextmanager
    def _stage(self, name: str) -> Iterator[None]:
        try:
            yield
        except AnalysisError as e:
            if e.stage is None:
                e.stage = name
            logger.error(f"Stage '{name}' failed: {e}")
            raise

    def run_command(self, command: str, inputs: PipelineInputs) -> ReportBundle:
        """
        Execute one analysis command.

        Args:
            command: One of COMMANDS
            inputs: Input file locations

        Returns:
            Report bundle with sections in a fixed order
        """
        if command not in COMMANDS:
            raise UsageError(f"Unknown command '{command}'; expected one of {', '.join(COMMANDS)}",
                             stage="config")
        bundle = ReportBundle(command=command)
        logger.info(f"Running '{command}' on {inputs.edges}")

        graph = self._load_graph(inputs, bundle)
        citations = self._load_citations(inputs, required=command in ("correlate", "deltas", "compare")
                                         or self.config.teleport == "citations")

        handler = getattr(self, f"_run_{command}")
        handler(graph, citations, inputs, bundle)
        logger.info(f"'{command}' produced {len(bundle.sections)} sections, {len(bundle.warnings)} warnings")
        return bundle

    # Loading

    def _load_graph(self, inputs: PipelineInputs, bundle: ReportBundle) -> CoauthorGraph:
        with self._stage("parse"):
            parsed = parse_edge_list(inputs.edges)
        bundle.warnings.extend(parsed.warnings)
        with self._stage("graph"):
            return build_graph(parsed.records)

    def _load_citations(self, inputs: PipelineInputs, required: bool) -> Optional[CitationProfile]:
        if inputs.citations is None:
            if required:
                raise UsageError("This analysis needs a citations file (--citations)", stage="config")
            return None
        with self._stage("parse"):
            return parse_citations(inputs.citations)

    def _load_awards(self, inputs: PipelineInputs) -> Optional[AwardList]:
        if inputs.awards is None:
            return None
        with self._stage("parse"):
            return parse_awards(inputs.awards)

    # Shared steps

    def _ranked_components(self, graph: CoauthorGraph) -> List[CoauthorGraph]:
        with self._stage("graph"):
            if self.config.all_components:
                return [c for c in components(graph) if len(c) >= 2] or [largest_component(graph)]
            return [largest_component(graph)]

    def _operator(self, component: CoauthorGraph) -> StochasticOperator:
        with self._stage("graph"):
            return stochastic_operator(component, self.config.mode)

    def _teleport(self, op: StochasticOperator, citations: Optional[CitationProfile],
                  bundle: ReportBundle, kind: Optional[str] = None) -> TeleportVector:
        kind = kind or self.config.teleport
        with self._stage("rank"):
            if kind == "citations":
                teleport = citation_teleport(citations, op.nodes)
                if teleport.missing_authors:
                    bundle.warnings.append(
                        f"{len(teleport.missing_authors)} ranked authors have no citation count; using 0"
                    )
                return teleport
            return uniform_teleport(op.size, op.nodes)

    def _pagerank(self, op: StochasticOperator, teleport: TeleportVector, d: float) -> ScoreVector:
        with self._stage("rank"):
            return pagerank(op, teleport, d, self.config.tolerance, self.config.max_iter)

    def _primary_scores(self, graph: CoauthorGraph, citations: Optional[CitationProfile],
                        bundle: ReportBundle) -> Tuple[CoauthorGraph, ScoreVector]:
        component = self._ranked_components(graph)[0]
        op = self._operator(component)
        return component, self._pagerank(op, self._teleport(op, citations, bundle), self.config.damping)

    def _citation_map(self, nodes, citations: CitationProfile, bundle: ReportBundle) -> Dict[str, float]:
        missing = [n for n in nodes if n not in citations.totals]
        if missing:
            bundle.warnings.append(f"{len(missing)} authors have no citation count; using 0")
        return {n: float(citations.totals.get(n, 0)) for n in nodes}

    # Commands

    def _run_component(self, graph, citations, inputs, bundle: ReportBundle) -> None:
        with self._stage("graph"):
            summary = component_summary(graph)
            largest = largest_component(graph)
        bundle.add("components", ["component", "size", "edges", "smallest_member"],
                   [[s.index, s.size, s.edges, s.smallest_member] for s in summary])
        bundle.add("largest_component", ["author", "coauthors", "weighted_degree"],
                   [[a, largest.degree(a), largest.weighted_degree(a)] for a in largest.nodes])

    def _run_rank(self, graph, citations, inputs, bundle: ReportBundle) -> None:
        ranked = self._ranked_components(graph)
        if self.config.all_components and len(ranked) > 1:
            bundle.warnings.append(
                "Scores are normalized within each component and are not comparable across components"
            )
        summary_rows = []
        for index, component in enumerate(ranked, start=1):
            op = self._operator(component)
            vector = self._pagerank(op, self._teleport(op, citations, bundle), self.config.damping)
            table = ranking_table(vector)
            name = f"ranking_component_{index}" if self.config.all_components else "ranking"
            bundle.add(name, ["rank", "author", "score"],
                       [[row.rank, row.author, row.score] for row in table.rows])
            summary_rows.append([index, vector.label, len(component), vector.iterations, vector.residual])
        bundle.add("rank_summary", ["component", "algorithm", "nodes", "iterations", "residual"], summary_rows)

    def _run_sweep(self, graph, citations, inputs, bundle: ReportBundle) -> None:
        component = self._ranked_components(graph)[0]
        op = self._operator(component)
        teleport = self._teleport(op, citations, bundle)
        with self._stage("rank"):
            sweep = damping_sweep(op, teleport, self.config.damping_schedule(), self.config.tolerance,
                                  self.config.max_iter, self.config.workers)

        tables = {vector.label: ranking_table(vector) for vector in sweep.values()}
        k = min(self.config.top_k, len(component))
        with self._stage("metrics"):
            heads = {label: top_k(table, k) for label, table in tables.items()}
            union, shared = top_k_overlap(tables, k)
        bundle.add("top_k", ["position"] + list(heads),
                   [[i + 1] + [heads[label][i][0] for label in heads] for i in range(k)])
        bundle.add("top_k_overlap", ["set", "authors", "members"], [
            ["union", len(union), "; ".join(union)],
            ["intersection", len(shared), "; ".join(shared)],
        ])

        if len(sweep) >= 2:
            with self._stage("stats"):
                matrix = cross_damping_matrix(sweep)
            labels = [f"{d:g}" for d in matrix.dampings]
            bundle.add("cross_damping", ["damping"] + labels,
                       [[labels[i]] + row for i, row in enumerate(matrix.matrix)])
        else:
            bundle.warnings.append("Cross-damping matrix needs at least 2 damping factors; skipped")

        if citations is not None and len(component) >= 3:
            try:
                by_damping = citation_correlation_by_damping(sweep, citations)
            except AnalysisError as e:
                bundle.warnings.append(f"No citation correlation across damping factors: {e.message}")
                return
            bundle.add("citation_correlation", ["algorithm", "rho", "p_value"],
                       [[sweep[d].label, rho, p] for d, (rho, p) in by_damping.items()])

    def _levels(self, n: int, bundle: ReportBundle) -> List[int]:
        kept = [c for c in self.config.levels if c < n]
        dropped = [c for c in self.config.levels if c > n]
        if dropped:
            bundle.warnings.append(f"Level cut points {dropped} exceed the {n} ranked authors; dropped")
        return kept + [n]

    def _correlation_rows(self, report: CorrelationReport) -> List[list]:
        return [[level.label, level.lower, level.upper, level.size, level.rho, level.p_value,
                 level.note or ""] for level in report.levels]

    def _run_correlate(self, graph, citations, inputs, bundle: ReportBundle) -> None:
        component, vector = self._primary_scores(graph, citations, bundle)
        scores = vector.as_dict()
        cited = self._citation_map(component.nodes, citations, bundle)
        n = len(component)
        obverse = self._levels(n, bundle)
        reverse = sorted({1} | {c for c in obverse if c < n})

        columns = ["level", "lower", "upper", "size", "rho", "p_value", "note"]
        with self._stage("stats"):
            for direction, cuts in (("obverse", obverse), ("reverse", reverse)):
                report = stratified_correlation(scores, cited, base="b", levels=cuts, direction=direction)
                for level in report.levels:
                    if level.skipped:
                        bundle.warnings.append(f"Level {level.label} skipped: {level.note}")
                bundle.add(f"correlation_{direction}", columns, self._correlation_rows(report))
            points = scatter_points(citations, vector)
        bundle.add("scatter", ["author", "citations", vector.label], [list(p) for p in points])

    def _run_fit(self, graph, citations, inputs, bundle: ReportBundle) -> None:
        component, vector = self._primary_scores(graph, citations, bundle)
        series: List[Tuple[str, List[float]]] = []
        if citations is not None:
            cited = self._citation_map(component.nodes, citations, bundle)
            positive = [v for v in cited.values() if v > 0]
            if len(positive) < len(cited):
                bundle.warnings.append(
                    f"{len(cited) - len(positive)} authors with zero citations left out of the citation fit"
                )
            series.append(("citations", positive))
        series.append((vector.label, [float(x) for x in vector.entries]))
        series.append(("coauthors", component.degree_distribution(weighted=False)))

        fit_rows, point_rows = [], []
        for name, values in series:
            try:
                fit = powerlaw_fit(values, self.config.powerlaw_bins)
            except (InsufficientBins, NonPositiveValues) as e:
                bundle.warnings.append(f"No power-law fit for {name}: {e.message}")
                fit_rows.append([name, None, None, None, e.message])
                continue
            fit_rows.append([name, fit.exponent, fit.r, fit.bins_used, ""])
            point_rows.extend([name, x, f] for x, f in fit.points)
        bundle.add("powerlaw", ["series", "exponent", "r", "bins_used", "note"], fit_rows)
        bundle.add("powerlaw_points", ["series", "value", "frequency"], point_rows)

    def _run_deltas(self, graph, citations, inputs, bundle: ReportBundle) -> None:
        component, vector = self._primary_scores(graph, citations, bundle)
        with self._stage("metrics"):
            cited = citation_rank(citations, component.nodes)
        with self._stage("stats"):
            report = rank_deltas(cited, ranking_table(vector))
        bundle.add("rank_deltas", ["author", "citation_rank", f"{vector.label}_rank", "delta"],
                   [[d.author, d.rank_a, d.rank_b, d.delta] for d in report.deltas])
        bundle.add("qq", ["empirical", "theoretical"],
                   [[q.empirical, q.theoretical] for q in report.quantiles])

    def _run_compare(self, graph, citations, inputs, bundle: ReportBundle) -> None:
        component = self._ranked_components(graph)[0]
        op = self._operator(component)
        teleports = {
            "citations": self._teleport(op, citations, bundle, kind="citations"),
            "uniform": self._teleport(op, citations, bundle, kind="uniform"),
        }
        rankings: Dict[str, RankingTable] = {}
        for d in self.config.compare_dampings:
            for kind in ("citations", "uniform"):
                vector = self._pagerank(op, teleports[kind], d)
                rankings[vector.label] = ranking_table(vector)

        winners = self._load_awards(inputs)
        extras = {}
        with self._stage("parse"):
            for name, path in sorted(inputs.extras.items()):
                extras[name] = parse_extra_column(path)

        with self._stage("metrics"):
            table = comparison_table(rankings, citations, winners, extras)
        columns = ["author"] + table.ranking_names
        if table.has_citations:
            columns.append("citations")
        if table.has_h_index:
            columns.append("h_index")
        columns += table.extra_names
        if table.has_winners:
            columns.append("winner")
        rows = []
        for row in table.rows:
            cells = [row.author] + [row.ranks[name] for name in table.ranking_names]
            if table.has_citations:
                cells.append(row.citations)
            if table.has_h_index:
                cells.append(row.h_index)
            cells += [row.extras.get(name) for name in table.extra_names]
            if table.has_winners:
                cells.append(row.winner)
            rows.append(cells)
        bundle.add("comparison", columns, rows)

        if winners is not None:
            with self._stage("metrics"):
                recall_tables = dict(rankings)
                recall_tables["citations"] = citation_rank(citations, component.nodes)
                recall = award_recall(recall_tables, winners, self.config.award_count)
            matched, _ = winners.split(component.nodes)
            required = self.config.award_count or len(matched)
            bundle.add("award_recall", ["ranking", "winners_required", "prefix_length"],
                       [[name, required, length if length is not None else "not reachable"]
                        for name, length in recall.items()])
            if table.unmatched_winners:
                bundle.warnings.append(
                    f"{len(table.unmatched_winners)} award winners are not in the ranked component"
                )
                bundle.add("unmatched_winners", ["author"], [[w] for w in table.unmatched_winners])
