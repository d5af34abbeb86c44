"""Pipeline configuration: a key=value file with flag overrides."""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import SnapdiffError
from .ingest import ARTICLE_FORMATS, TRIPLE_FORMATS, SnapshotPair
from .probeqc import (
    DEFAULT_OBJECT_CAP,
    DEFAULT_RELATION_CAP,
    DEFAULT_SAMPLE_RATE,
    DEFAULT_SUBJECT_CAP,
)


class ConfigError(SnapdiffError):
    """Configuration is incomplete or invalid."""


@dataclass
class PipelineConfig:
    prev_articles: Path | None = None
    recent_articles: Path | None = None
    articles_format: str = "article-records"
    prev_triples: Path | None = None
    recent_triples: Path | None = None
    triples_format: str = "tsv"
    mapping: Path | None = None
    out_dir: Path | None = None
    prev_tag: str = ""
    recent_tag: str = ""
    seed: int = 0
    sample_rate: float = DEFAULT_SAMPLE_RATE
    subject_cap: float = DEFAULT_SUBJECT_CAP
    object_cap: float = DEFAULT_OBJECT_CAP
    relation_cap: float = DEFAULT_RELATION_CAP
    workers: int = 0  # 0 means use available parallelism
    case_insensitive: bool = False
    strip_markup: bool = False

    _PATH_FIELDS = (
        "prev_articles",
        "recent_articles",
        "prev_triples",
        "recent_triples",
        "mapping",
        "out_dir",
    )
    _BOOL_FIELDS = ("case_insensitive", "strip_markup")
    _INT_FIELDS = ("seed", "workers")
    _FLOAT_FIELDS = ("sample_rate", "subject_cap", "object_cap", "relation_cap")

    def set_value(self, key: str, raw: str) -> None:
        if key in self._PATH_FIELDS:
            setattr(self, key, Path(raw))
        elif key in self._BOOL_FIELDS:
            setattr(self, key, _parse_bool(key, raw))
        elif key in self._INT_FIELDS:
            setattr(self, key, _parse_num(int, key, raw))
        elif key in self._FLOAT_FIELDS:
            setattr(self, key, _parse_num(float, key, raw))
        elif key in ("articles_format", "triples_format", "prev_tag", "recent_tag"):
            setattr(self, key, raw)
        else:
            raise ConfigError(f"unknown config key {key!r}")

    def effective_workers(self) -> int:
        if self.workers >= 1:
            return self.workers
        return os.cpu_count() or 1

    def snapshot_pair(self) -> SnapshotPair:
        return SnapshotPair(self.prev_tag, self.recent_tag)

    def semantic_hash(self) -> str:
        """Hash of the processing parameters that can affect output bytes.

        Paths are excluded (input identity lives in the manifest checksums)
        and so is the worker count: outputs are worker-count independent by
        contract.
        """
        parts = []
        for f in fields(self):
            if f.name == "workers" or f.name in self._PATH_FIELDS:
                continue
            parts.append(f"{f.name}={getattr(self, f.name)}")
        digest = hashlib.sha256("\n".join(parts).encode("utf-8")).hexdigest()
        return digest

    def validate(self, need_articles=False, need_triples=False, need_out=True) -> None:
        if need_out and self.out_dir is None:
            raise ConfigError("out_dir is required")
        if need_articles:
            self._require_paths("prev_articles", "recent_articles")
            if self.articles_format not in ARTICLE_FORMATS:
                raise ConfigError(f"articles_format must be one of {ARTICLE_FORMATS}")
        if need_triples:
            self._require_paths("prev_triples", "recent_triples", "mapping")
            if self.triples_format not in TRIPLE_FORMATS:
                raise ConfigError(f"triples_format must be one of {TRIPLE_FORMATS}")
        if need_articles or need_triples:
            if not self.prev_tag or not self.recent_tag:
                raise ConfigError("prev_tag and recent_tag are required (YYYY-MM)")
            try:
                self.snapshot_pair()
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
        if not 0.0 < self.sample_rate <= 1.0:
            raise ConfigError(f"sample_rate must be in (0, 1], got {self.sample_rate}")
        for name in ("subject_cap", "object_cap", "relation_cap"):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise ConfigError(f"{name} must be in (0, 1], got {value}")
        if self.workers < 0:
            raise ConfigError("workers must be >= 1 (or 0 for auto)")

    def _require_paths(self, *names: str) -> None:
        for name in names:
            value = getattr(self, name)
            if value is None:
                raise ConfigError(f"{name} is required")
            if not Path(value).exists():
                raise ConfigError(f"{name}: no such file: {value}")


def _parse_bool(key: str, raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {raw!r}")


def _parse_num(parse, key: str, raw: str):
    try:
        return parse(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from exc


def load_config_file(path: str | Path) -> PipelineConfig:
    """Parse a key=value config file ('#' starts a comment)."""
    config = PipelineConfig()
    apply_config_file(config, path)
    return config


def apply_config_file(config: PipelineConfig, path: str | Path) -> None:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = stripped.partition("=")
        config.set_value(key.strip(), value.strip())
