"""End-to-end pipeline runs: diffset construction, probe construction,
statistics. All outputs are written to a staging directory and committed
into the output directory with atomic renames, so final paths never hold
partial files.
"""

from __future__ import annotations

import hashlib
import shutil
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from . import stats as statsmod
from .categorize import categorize
from .config import PipelineConfig
from .diffing import DiffKind, DiffsetEntry, build_diffset
from .ingest import (
    dedupe_triples,
    read_articles,
    read_mapping,
    read_rows,
    read_triples,
    write_records,
)
from .probeqc import build_probes
from .stats import DistributionKind
from .textseg import canonical_text

DIFFSET_FILE = "diffset.tsv"
PROBES_FILE = "probes.tsv"
STATS_TEXT_FILE = "stats.txt"
STATS_TSV_FILE = "stats.tsv"
FUNNEL_TEXT_FILE = "funnel.txt"
FUNNEL_TSV_FILE = "funnel.tsv"
MANIFEST_FILE = "manifest.txt"

ALL_OUTPUTS = (
    DIFFSET_FILE,
    PROBES_FILE,
    STATS_TEXT_FILE,
    STATS_TSV_FILE,
    FUNNEL_TEXT_FILE,
    FUNNEL_TSV_FILE,
    MANIFEST_FILE,
)


@dataclass
class _Row:
    """Adapter giving probe/stat rows named label attributes."""

    category: str
    subject_label: str
    relation_label: str
    object_label: str
    aligned_article_id: str
    serialized: str


class Staging:
    """Write files under a hidden staging dir, then commit atomically."""

    def __init__(self, out_dir: Path):
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.dir = Path(tempfile.mkdtemp(prefix=".staging-", dir=self.out_dir))
        self._files: list[str] = []

    def path(self, name: str) -> Path:
        self._files.append(name)
        return self.dir / name

    def commit(self) -> None:
        for name in self._files:
            (self.dir / name).replace(self.out_dir / name)
        self.cleanup()

    def cleanup(self) -> None:
        shutil.rmtree(self.dir, ignore_errors=True)


def _file_sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(config: PipelineConfig, staging: Staging, inputs: Iterable[str]) -> None:
    lines = [
        f"seed={config.seed}",
        f"pair={config.prev_tag}..{config.recent_tag}",
        f"config_sha256={config.semantic_hash()}",
    ]
    for name in inputs:
        path = getattr(config, name)
        if path is not None:
            lines.append(f"input_sha256.{name}={_file_sha256(Path(path))}")
    staging.path(MANIFEST_FILE).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _read_snapshot(config: PipelineConfig, which: str):
    path = getattr(config, f"{which}_articles")
    tag = getattr(config, f"{which}_tag")
    return read_articles(
        path,
        format=config.articles_format,
        snapshot_tag=tag,
        strip_markup=config.strip_markup,
    )


def compute_diffset(config: PipelineConfig) -> list[DiffsetEntry]:
    return build_diffset(
        _read_snapshot(config, "prev"),
        _read_snapshot(config, "recent"),
        pair=config.snapshot_pair(),
        workers=config.effective_workers(),
    )


def run_diffset(config: PipelineConfig, staging: Staging | None = None) -> statsmod.CorpusStats:
    """Build the diffset file plus its corpus stats. Returns the stats."""
    own_staging = staging is None
    if staging is None:
        staging = Staging(config.out_dir)
    try:
        entries = compute_diffset(config)
        write_records(entries, staging.path(DIFFSET_FILE))
        diff_stats = statsmod.corpus_stats(
            entries, tag=config.snapshot_pair().label
        )
        if own_staging:
            write_manifest(config, staging, ("prev_articles", "recent_articles"))
            staging.commit()
        return diff_stats
    except BaseException:
        if own_staging:
            staging.cleanup()
        raise


def load_diffset(path: Path) -> list[DiffsetEntry]:
    entries = []
    for article_id, title, kind, text in read_rows(path, 4):
        entries.append(DiffsetEntry(article_id, title, DiffKind(kind), text))
    return entries


def load_probe_rows(path: Path) -> list[_Row]:
    return [_Row(*fields) for fields in read_rows(path, 6)]


def _run_probe_stage(config: PipelineConfig, staging: Staging, entries: list[DiffsetEntry]):
    mapping = read_mapping(config.mapping)
    prev_triples = dedupe_triples(
        read_triples(config.prev_triples, config.triples_format, config.prev_tag)
    )
    recent_triples = dedupe_triples(
        read_triples(config.recent_triples, config.triples_format, config.recent_tag)
    )
    categorized = categorize(prev_triples, recent_triples)

    diffset_texts = {e.article_id: e.text for e in entries}
    recent_texts = {
        a.article_id: canonical_text(a.text) for a in _read_snapshot(config, "recent")
    }
    probes, report = build_probes(
        categorized,
        mapping,
        diffset_texts,
        recent_texts,
        sample_rate=config.sample_rate,
        seed=config.seed,
        subject_cap_frac=config.subject_cap,
        object_cap_frac=config.object_cap,
        relation_cap_frac=config.relation_cap,
        case_sensitive=not config.case_insensitive,
    )
    write_records(probes, staging.path(PROBES_FILE))
    staging.path(FUNNEL_TEXT_FILE).write_text(
        statsmod.probe_funnel(report), encoding="utf-8"
    )
    write_records(statsmod.funnel_rows(report), staging.path(FUNNEL_TSV_FILE))
    return probes, report


def run_probes(config: PipelineConfig, staging: Staging | None = None):
    """Build the probe file and funnel report against an existing diffset
    (reused from the output directory when present, rebuilt otherwise)."""
    own_staging = staging is None
    if staging is None:
        staging = Staging(config.out_dir)
    try:
        existing = Path(config.out_dir) / DIFFSET_FILE
        if existing.exists():
            entries = load_diffset(existing)
        else:
            entries = compute_diffset(config)
            write_records(entries, staging.path(DIFFSET_FILE))
        probes, report = _run_probe_stage(config, staging, entries)
        if own_staging:
            write_manifest(
                config,
                staging,
                ("prev_articles", "recent_articles", "prev_triples", "recent_triples", "mapping"),
            )
            staging.commit()
        return probes, report
    except BaseException:
        if own_staging:
            staging.cleanup()
        raise


def _write_stats(staging: Staging, diff_stats: statsmod.CorpusStats, probe_rows) -> None:
    sections = [statsmod.corpus_stats_text(diff_stats, diff_stats.tag or "diffset")]
    tsv_rows: list[tuple[str, ...]] = [
        ("diffset", "articles", str(diff_stats.article_count)),
        ("diffset", "tokens", str(diff_stats.token_count)),
    ]
    for kind in DistributionKind:
        report = statsmod.distribution(probe_rows, kind)
        sections.append(statsmod.distribution_text(report))
        for label, count, fraction in report.entries:
            tsv_rows.append((kind.value, label, str(count), f"{fraction:.6f}"))
    staging.path(STATS_TEXT_FILE).write_text("\n".join(sections), encoding="utf-8")
    write_records(tsv_rows, staging.path(STATS_TSV_FILE))


def run_stats(config: PipelineConfig, staging: Staging | None = None) -> None:
    """Recompute stats files from diffset and probe files already in the
    output directory."""
    out_dir = Path(config.out_dir)
    entries = load_diffset(out_dir / DIFFSET_FILE)
    probe_rows = load_probe_rows(out_dir / PROBES_FILE)
    diff_stats = statsmod.corpus_stats(entries, tag=f"{config.prev_tag}..{config.recent_tag}")
    own_staging = staging is None
    if staging is None:
        staging = Staging(config.out_dir)
    try:
        _write_stats(staging, diff_stats, probe_rows)
        if own_staging:
            staging.commit()
    except BaseException:
        if own_staging:
            staging.cleanup()
        raise


def outputs_complete(out_dir: Path) -> bool:
    return all((Path(out_dir) / name).exists() for name in ALL_OUTPUTS)


def run_all(config: PipelineConfig, force: bool = False) -> bool:
    """Run diffset, probes, and stats as one atomic unit.

    Returns False without touching anything when the output directory is
    already complete and ``force`` is not set.
    """
    if not force and outputs_complete(config.out_dir):
        return False
    staging = Staging(config.out_dir)
    try:
        entries = compute_diffset(config)
        write_records(entries, staging.path(DIFFSET_FILE))
        diff_stats = statsmod.corpus_stats(entries, tag=config.snapshot_pair().label)
        probes, _report = _run_probe_stage(config, staging, entries)
        _write_stats(staging, diff_stats, probes)
        write_manifest(
            config,
            staging,
            ("prev_articles", "recent_articles", "prev_triples", "recent_triples", "mapping"),
        )
        staging.commit()
        return True
    except BaseException:
        staging.cleanup()
        raise
