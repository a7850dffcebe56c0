"""
Command-line entry point: `python -m src.cli <command> [options]`.

Exit codes: 0 success, 1 input error, 2 numerical failure, 3 usage error.
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

from src.config import load_run_config
from src.errors import EXIT_INPUT, EXIT_OK, EXIT_USAGE, AnalysisError, UsageError
from src.pipeline import COMMANDS, AnalysisPipeline, PipelineInputs
from src.report import render_bundle
from src.utils import setup_logging, write_output, write_synthetic_dataset

logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

COMMAND_HELP = {
    "component": "component sizes and the largest component",
    "rank": "PageRank (uniform teleport) or weighted PageRank (citation teleport) at one damping factor",
    "sweep": "top-k per damping factor and the cross-damping correlation matrix",
    "correlate": "stratified Spearman correlation between PageRank and citations",
    "fit": "log-log power-law fits of citations, PageRank and coauthor counts",
    "deltas": "rank changes between citation and PageRank rankings with Q-Q data",
    "compare": "rank comparison with citations, h-index, extra columns and award recall",
}


class UsageArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that exits with the usage-error code."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        _report_error(UsageError(message, stage="config"))
        sys.exit(EXIT_USAGE)


def _report_error(error: AnalysisError) -> None:
    sys.stderr.write(json.dumps(error.to_dict(), sort_keys=True) + "\n")


def _extra_column(value: str) -> Dict[str, str]:
    name, sep, path = value.partition("=")
    if not sep or not name or not path:
        raise argparse.ArgumentTypeError(f"expected NAME=PATH, got {value!r}")
    return {name: path}


def _add_analysis_options(parser: argparse.ArgumentParser) -> None:
    inputs = parser.add_argument_group("inputs")
    inputs.add_argument("--edges", required=True, help="edge list TSV: authorA, authorB, weight")
    inputs.add_argument("--citations", help="citations TSV: author, total, per-paper counts")
    inputs.add_argument("--awards", help="award winners, one author per line")
    inputs.add_argument("--extra", action="append", type=_extra_column, default=[],
                        metavar="NAME=PATH", help="extra integer column for compare (repeatable)")

    run = parser.add_argument_group("run configuration")
    run.add_argument("--config", help="YAML or key = value config file")
    run.add_argument("--damping", type=float)
    run.add_argument("--schedule", help="comma-separated damping factors for sweep")
    run.add_argument("--tolerance", type=float)
    run.add_argument("--max-iter", type=int, dest="max_iter")
    run.add_argument("--mode", choices=["weighted", "unweighted"])
    run.add_argument("--teleport", choices=["uniform", "citations"])
    run.add_argument("--levels", help="comma-separated ranking-level cut points")
    run.add_argument("--format", choices=["csv", "tsv", "markdown"], dest="output_format")
    run.add_argument("--top-k", type=int, dest="top_k")
    run.add_argument("--bins", type=int, dest="powerlaw_bins", help="log bins for continuous fits")
    run.add_argument("--compare-dampings", dest="compare_dampings",
                     help="comma-separated damping factors for compare")
    run.add_argument("--award-count", type=int, dest="award_count")
    run.add_argument("--workers", type=int)
    run.add_argument("--all-components", action="store_const", const=True, dest="all_components",
                     help="rank every component of size >= 2 separately")
    run.add_argument("--log-level", dest="log_level", type=str.upper, choices=LOG_LEVELS)
    run.add_argument("--output", "-o", help="output file (default: standard output)")


def build_parser() -> argparse.ArgumentParser:
    parser = UsageArgumentParser(
        prog="coauthor-pagerank",
        description="PageRank and weighted PageRank analyses of coauthorship networks",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=UsageArgumentParser)
    for command in COMMANDS:
        _add_analysis_options(subparsers.add_parser(command, help=COMMAND_HELP[command]))

    generate = subparsers.add_parser("generate", help="write a synthetic coauthorship dataset")
    generate.add_argument("--out-dir", required=True)
    generate.add_argument("--nodes", type=int, default=1000)
    generate.add_argument("--attach", type=int, default=2, help="edges per new author")
    generate.add_argument("--seed", type=int, default=7)
    generate.add_argument("--winners", type=int, default=12)
    generate.add_argument("--log-level", dest="log_level", type=str.upper, choices=LOG_LEVELS,
                          default="INFO")
    return parser


CONFIG_KEYS = ("damping", "schedule", "tolerance", "max_iter", "mode", "teleport", "levels",
               "output_format", "top_k", "powerlaw_bins", "compare_dampings", "award_count",
               "workers", "all_components", "log_level")


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {key: getattr(args, key) for key in CONFIG_KEYS if getattr(args, key, None) is not None}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "generate":
        setup_logging(args.log_level)
        try:
            write_synthetic_dataset(args.out_dir, args.nodes, args.attach, args.seed, args.winners)
        except AnalysisError as e:
            if e.stage is None:
                e.stage = "config"
            _report_error(e)
            return e.exit_code
        except OSError as e:
            _report_error(AnalysisError(f"Cannot write dataset: {e}", stage="report"))
            return EXIT_INPUT
        return EXIT_OK

    setup_logging(args.log_level or "INFO")
    try:
        config = load_run_config(args.config, _overrides(args))
        setup_logging(config.log_level)
        extras: Dict[str, str] = {}
        for item in args.extra:
            extras.update(item)
        inputs = PipelineInputs(edges=args.edges, citations=args.citations, awards=args.awards,
                                extras=extras)
        bundle = AnalysisPipeline(config).run_command(args.command, inputs)
        text = render_bundle(bundle, config.output_format)
    except AnalysisError as e:
        if e.stage is None:
            e.stage = "config"
        _report_error(e)
        return e.exit_code

    for warning in bundle.warnings:
        sys.stderr.write(f"warning: {warning}\n")
    try:
        write_output(text, args.output)
    except OSError as e:
        _report_error(AnalysisError(f"Cannot write output: {e}", stage="report"))
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
