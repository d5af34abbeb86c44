"""snapdiff: build training diffsets and evaluation probes from consecutive
snapshots of an article corpus and a fact knowledge base."""

from .categorize import CategorizedFact, Category, Reason, categorize
from .diffing import DiffKind, DiffsetEntry, build_diffset, get_diff
from .ingest import (
    ArticleSnapshot,
    EntityMapping,
    FactTriple,
    SnapshotPair,
    read_articles,
    read_mapping,
    read_triples,
    write_records,
)
from .probeqc import (
    AlignedKind,
    FilterReport,
    ProbeInstance,
    align,
    build_probes,
    filter_frequency,
    filter_object_length,
    filter_substring,
    sample_unchanged,
)
from .stats import CorpusStats, DistributionKind, corpus_stats, distribution, probe_funnel
from .textseg import SegmentedArticle, canonical_text, normalize, segment_text

__version__ = "0.1.0"

__all__ = [
    "ArticleSnapshot",
    "AlignedKind",
    "CategorizedFact",
    "Category",
    "CorpusStats",
    "DiffKind",
    "DiffsetEntry",
    "DistributionKind",
    "EntityMapping",
    "FactTriple",
    "FilterReport",
    "ProbeInstance",
    "Reason",
    "SegmentedArticle",
    "SnapshotPair",
    "align",
    "build_diffset",
    "build_probes",
    "canonical_text",
    "categorize",
    "corpus_stats",
    "distribution",
    "filter_frequency",
    "filter_object_length",
    "filter_substring",
    "get_diff",
    "normalize",
    "probe_funnel",
    "read_articles",
    "read_mapping",
    "read_triples",
    "sample_unchanged",
    "segment_text",
    "write_records",
]
