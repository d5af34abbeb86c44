"""Probe-file perplexity: per-instance, per-category, and relative reports.

An instance's perplexity is exp(mean per-token NLL) of its serialized
string; a category's value is the unweighted mean over its instances, and
the report average weights the two categories equally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Union

from .records import ProbeRow, escape_field, read_probe_file
from .scoring import TokenScorer

UNCHANGED = "Unchanged"
CHANGED = "Changed"


class EmptyCategory(Exception):
    """A probe category has no instances to average."""


@dataclass(frozen=True)
class EvalReport:
    unchanged_perplexity: float
    changed_perplexity: float
    unchanged_count: int
    changed_count: int

    @property
    def mean_perplexity(self) -> float:
        return (self.unchanged_perplexity + self.changed_perplexity) / 2.0

    def rows(self) -> list[tuple[str, str, str]]:
        return [
            (UNCHANGED, f"{self.unchanged_perplexity:.6f}", str(self.unchanged_count)),
            (CHANGED, f"{self.changed_perplexity:.6f}", str(self.changed_count)),
            (
                "Avg",
                f"{self.mean_perplexity:.6f}",
                str(self.unchanged_count + self.changed_count),
            ),
        ]


def instance_perplexity(text: str, scorer: TokenScorer) -> float:
    scoring = scorer.score(text)
    if not scoring.nlls:
        raise ValueError(f"scorer produced no tokens for {text!r}")
    return math.exp(sum(scoring.nlls) / len(scoring.nlls))


def probe_perplexity(
    probes: Union[str, Path, IO[bytes], Iterable[ProbeRow]],
    scorer: TokenScorer,
) -> EvalReport:
    """Average perplexity of generating each probe, split by category."""
    if isinstance(probes, (str, Path)) or hasattr(probes, "read"):
        rows = read_probe_file(probes)
    else:
        rows = list(probes)
    sums = {UNCHANGED: 0.0, CHANGED: 0.0}
    counts = {UNCHANGED: 0, CHANGED: 0}
    for row in rows:
        if row.category not in sums:
            raise ValueError(f"unknown category {row.category!r}")
        sums[row.category] += instance_perplexity(row.serialized, scorer)
        counts[row.category] += 1
    for category, count in counts.items():
        if count == 0:
            raise EmptyCategory(f"no {category} instances in probe input")
    return EvalReport(
        unchanged_perplexity=sums[UNCHANGED] / counts[UNCHANGED],
        changed_perplexity=sums[CHANGED] / counts[CHANGED],
        unchanged_count=counts[UNCHANGED],
        changed_count=counts[CHANGED],
    )


@dataclass(frozen=True)
class RelativeReport:
    unchanged_ratio: float
    changed_ratio: float
    mean_ratio: float


def relative_report(current, baseline):
    """Elementwise current/baseline; accepts two EvalReports or two
    positive numbers."""
    if isinstance(current, EvalReport) and isinstance(baseline, EvalReport):
        _require_positive(baseline.unchanged_perplexity)
        _require_positive(baseline.changed_perplexity)
        return RelativeReport(
            unchanged_ratio=current.unchanged_perplexity / baseline.unchanged_perplexity,
            changed_ratio=current.changed_perplexity / baseline.changed_perplexity,
            mean_ratio=current.mean_perplexity / baseline.mean_perplexity,
        )
    _require_positive(float(baseline))
    return float(current) / float(baseline)


def _require_positive(value: float) -> None:
    if value <= 0:
        raise ValueError(f"baseline perplexity must be > 0, got {value}")


def write_report(report: EvalReport, sink: Union[str, Path, IO[bytes]]) -> None:
    """Tab-separated (category, perplexity, count) with an Avg row."""
    if isinstance(sink, (str, Path)):
        with open(sink, "wb") as fh:
            write_report(report, fh)
        return
    for row in report.rows():
        sink.write(("\t".join(escape_field(f) for f in row) + "\n").encode("utf-8"))
