"""Command-line interface.

Subcommands: diffset, probes, stats, all. A key=value config file supplies
defaults; flags override. Exit codes: 0 success, 1 validation error,
2 processing error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import runner
from .config import ConfigError, PipelineConfig, apply_config_file
from .errors import SnapdiffError
from .ingest import ARTICLE_FORMATS, TRIPLE_FORMATS

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PROCESSING = 2


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="key=value config file")
    parser.add_argument("--prev-articles", type=Path, dest="prev_articles")
    parser.add_argument("--recent-articles", type=Path, dest="recent_articles")
    parser.add_argument(
        "--articles-format", choices=ARTICLE_FORMATS, dest="articles_format"
    )
    parser.add_argument("--prev-triples", type=Path, dest="prev_triples")
    parser.add_argument("--recent-triples", type=Path, dest="recent_triples")
    parser.add_argument("--triples-format", choices=TRIPLE_FORMATS, dest="triples_format")
    parser.add_argument("--mapping", type=Path)
    parser.add_argument("--out", type=Path, dest="out_dir")
    parser.add_argument("--prev-tag", dest="prev_tag", help="previous snapshot tag, YYYY-MM")
    parser.add_argument("--recent-tag", dest="recent_tag", help="recent snapshot tag, YYYY-MM")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--sample-rate", type=float, dest="sample_rate")
    parser.add_argument("--subject-cap", type=float, dest="subject_cap")
    parser.add_argument("--object-cap", type=float, dest="object_cap")
    parser.add_argument("--relation-cap", type=float, dest="relation_cap")
    parser.add_argument("--workers", type=int)
    parser.add_argument(
        "--case-insensitive", action="store_true", dest="case_insensitive", default=None
    )
    parser.add_argument(
        "--strip-markup", action="store_true", dest="strip_markup", default=None
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snapdiff",
        description="Build training diffsets and evaluation probes from "
        "consecutive corpus and fact-base snapshots.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("diffset", "extract new/updated article text between two snapshots"),
        ("probes", "categorize, align and filter fact probes"),
        ("stats", "recompute statistics from existing outputs"),
        ("all", "run the full pipeline"),
    ):
        command = sub.add_parser(name, help=help_text)
        _add_common_flags(command)
        if name == "all":
            command.add_argument("--force", action="store_true")
    return parser


def config_from_args(args: argparse.Namespace) -> PipelineConfig:
    config = PipelineConfig()
    if args.config is not None:
        apply_config_file(config, args.config)
    for key in (
        "prev_articles",
        "recent_articles",
        "articles_format",
        "prev_triples",
        "recent_triples",
        "triples_format",
        "mapping",
        "out_dir",
        "prev_tag",
        "recent_tag",
        "seed",
        "sample_rate",
        "subject_cap",
        "object_cap",
        "relation_cap",
        "workers",
        "case_insensitive",
        "strip_markup",
    ):
        value = getattr(args, key, None)
        if value is not None:
            setattr(config, key, value)
    return config


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        if args.command == "diffset":
            config.validate(need_articles=True)
        elif args.command == "probes":
            config.validate(need_articles=True, need_triples=True)
        elif args.command == "all":
            config.validate(need_articles=True, need_triples=True)
        else:
            config.validate()
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    try:
        if args.command == "diffset":
            diff_stats = runner.run_diffset(config)
            print(
                f"diffset: {diff_stats.article_count} entries, "
                f"{diff_stats.token_count} tokens -> {config.out_dir}"
            )
        elif args.command == "probes":
            probes, report = runner.run_probes(config)
            counts = report.after_rule3
            print(
                f"probes: {counts.unchanged} unchanged + {counts.changed} changed "
                f"-> {config.out_dir}"
            )
        elif args.command == "stats":
            runner.run_stats(config)
            print(f"stats -> {config.out_dir}")
        elif args.command == "all":
            ran = runner.run_all(config, force=getattr(args, "force", False))
            if not ran:
                print(f"{config.out_dir} is already complete; use --force to rerun")
            else:
                print(f"pipeline complete -> {config.out_dir}")
    except (SnapdiffError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROCESSING
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
