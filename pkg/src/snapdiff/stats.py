"""Corpus and probe statistics: counts, funnel tables, label distributions.

Token counts are whitespace tokens, deliberately tokenizer-neutral; adjust
expectations before comparing against model-tokenizer budgets.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .probeqc import FilterReport

DEFAULT_TOP_K = 30


@dataclass(frozen=True)
class CorpusStats:
    article_count: int
    token_count: int
    tag: str = ""

    def __add__(self, other: "CorpusStats") -> "CorpusStats":
        return CorpusStats(
            self.article_count + other.article_count,
            self.token_count + other.token_count,
            self.tag or other.tag,
        )


class DistributionKind(str, Enum):
    RELATION = "Relation"
    SUBJECT_ENTITY = "SubjectEntity"
    OBJECT_ENTITY = "ObjectEntity"


_KIND_ATTR = {
    DistributionKind.RELATION: "relation_label",
    DistributionKind.SUBJECT_ENTITY: "subject_label",
    DistributionKind.OBJECT_ENTITY: "object_label",
}


@dataclass(frozen=True)
class DistributionReport:
    kind: DistributionKind
    total: int
    entries: tuple[tuple[str, int, float], ...]  # (label, count, fraction)


def corpus_stats(entries: Iterable, tag: str = "") -> CorpusStats:
    """Count entries and whitespace tokens over anything with a .text."""
    articles = 0
    tokens = 0
    for entry in entries:
        articles += 1
        tokens += len(entry.text.split())
    return CorpusStats(articles, tokens, tag)


def distribution(
    instances: Iterable,
    kind: DistributionKind,
    top_k: int = DEFAULT_TOP_K,
) -> DistributionReport:
    """Top-k label counts, sorted by descending count then ascending label."""
    attr = _KIND_ATTR[kind]
    counts: dict[str, int] = {}
    total = 0
    for inst in instances:
        label = getattr(inst, attr)
        counts[label] = counts.get(label, 0) + 1
        total += 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:top_k]
    entries = tuple(
        (label, count, count / total if total else 0.0) for label, count in ranked
    )
    return DistributionReport(kind=kind, total=total, entries=entries)


def _format_table(header: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header))]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    return "\n".join(lines) + "\n"


def probe_funnel(report: FilterReport) -> str:
    """Render the construction funnel, one row per stage, unchanged and
    changed side by side."""
    report.validate()
    rows = [
        [name, str(counts.unchanged), str(counts.changed), str(counts.total)]
        for name, counts in report.stages()
    ]
    return _format_table(["stage", "unchanged", "changed", "total"], rows)


def funnel_rows(report: FilterReport) -> list[tuple[str, ...]]:
    """Machine-readable funnel rows (stage, unchanged, changed)."""
    report.validate()
    return [
        (name, str(counts.unchanged), str(counts.changed))
        for name, counts in report.stages()
    ]


def corpus_stats_text(stats: CorpusStats, label: str) -> str:
    rows = [[label, str(stats.article_count), str(stats.token_count)]]
    return _format_table(["corpus", "articles", "tokens"], rows)


def distribution_text(report: DistributionReport) -> str:
    rows = [
        [label, str(count), f"{fraction:.6f}"]
        for label, count, fraction in report.entries
    ]
    return _format_table([f"{report.kind.value.lower()}", "count", "fraction"], rows)
